#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phi4 {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCode : int {
  invalid_argument = 1,
  grid_mismatch = 2,
  blow_up = 3,
  not_converged = 4,
  io = 5,
  parse = 6,
  misaligned = 7,
  internal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised at the first non-finite coefficient of a trajectory.
class BlowUpError : public Error {
 public:
  BlowUpError(std::int64_t step, const std::string& what)
      : Error(ErrorCode::blow_up, what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) throw Error(code, what);
}

}  // namespace phi4
