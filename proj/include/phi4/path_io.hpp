#pragma once

// Path files: one JSON header line, one CSV column line, then one row per
// (snapshot, field):
//
//   {"format":"phi4-path","version":1,"dim":2,"cutoff":8,...,"fields":["phi","z","q"]}
//   index,t,field,re(k),im(k),...
//   0,0,phi,...
//
// Coefficients are listed for every |k|_inf <= N in lexicographic order
// (k1 outer, k2 inner, each from -N to N) and printed in shortest
// round-trip form, so reading a file back is exact.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phi4/config.hpp"

namespace phi4 {

struct PathHeader {
  int dim = 2;
  int cutoff = 0;
  int phys_points = 0;
  double spacing = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  double alpha = 0.0;
  double mass = 1.0;
  double c = 0.0;
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> fields;  // order of appearance per snapshot
};

struct PathFile {
  PathHeader header;
  std::map<std::string, FieldPath> fields;

  const FieldPath& field(const std::string& name) const;
};

void write_path_file(const std::string& file, const PathFile& data);
PathFile read_path_file(const std::string& file);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

}  // namespace phi4
