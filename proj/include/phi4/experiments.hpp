#pragma once

// Experiment layer behind the command line: a JSON experiment description,
// the verbs that execute it and the CSV/JSON files they write.
//
// Output schemas (first line of each CSV):
//   ftle.csv         alpha,seed,T,N,dt,burn_in,lambda_T,iters,residual,converged,wall_ms
//   failures.csv     alpha,seed,code,message
//   steer.csv        lambda_target,kappa,phi0,f,c,lambda_measured,abs_err
//   wick_check.csv   N,m,C_N,emp_var,se,zscore
//   diagnostics.csv  step,t,r_holder,r_sup,u1_norm,u2_norm
//   besov.csv        index,t,field,beta,besov_norm,block_-1,...,block_J
// plus path.csv (see path_io.hpp) and manifest.json.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phi4/config.hpp"
#include "phi4/ftle.hpp"

namespace phi4 {

extern const char* const kVersion;

extern const char* const kFtleColumns;
extern const char* const kSteerColumns;
extern const char* const kWickColumns;

struct ExperimentSpec {
  std::string mode;  // simulate | stationary | ftle | sweep | steer | wick-check | besov
  SolverConfig solver;
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds;
  double burn_in = 1.0;
  FtleOptions ftle;
  std::string out_dir = ".";
  int workers = 1;
  bool timing = false;  // fill wall_ms; otherwise 0 so outputs stay byte-stable

  std::vector<double> lambdas;   // steer
  std::vector<int> wick_cutoffs; // wick-check
  int wick_samples = 10000;
  std::string input;             // ftle, besov
  std::string field;
  double beta = -0.1;            // besov
  std::string init = "zero";     // simulate: zero | gff
  bool split_diagnostics = false;

  std::string echo;  // normalized JSON of the experiment, written to the manifest
};

/// Parses and validates an experiment description; throws Error with
/// ErrorCode::parse on any problem.
ExperimentSpec parse_spec(const std::string& json_text);

struct SweepSummary {
  std::size_t total = 0;
  std::size_t skipped = 0;  // already present in ftle.csv or failures.csv
  std::size_t completed = 0;
  std::size_t failed = 0;
};

/// One (alpha, seed) job: burn-in stationary run, q path, FTLE.
FtleSample sweep_job(const ExperimentSpec& spec, double alpha, std::uint64_t seed);

/// Runs all (alpha, seed) jobs missing from out_dir/ftle.csv on `workers`
/// threads. Rows are written in job order (alphas outer, seeds inner) so the
/// file does not depend on the number of workers.
SweepSummary run_sweep(const ExperimentSpec& spec, std::ostream& log);

/// Executes a parsed spec and writes manifest.json. Throws on failure.
void run_experiment(const ExperimentSpec& spec, std::ostream& log);

/// Parse + run with exit status: 0 success, 2 invalid configuration, 1 runtime failure.
int run_config_text(const std::string& json_text, std::ostream& log, std::ostream& err);

}  // namespace phi4
