#include "phi4/experiments.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "phi4/dpd_solver.hpp"
#include "phi4/error.hpp"
#include "phi4/littlewood_paley.hpp"
#include "phi4/path_io.hpp"
#include "phi4/stationary_flow.hpp"
#include "phi4/steer.hpp"
#include "phi4/wick.hpp"

#ifndef PHI4_VERSION
#define PHI4_VERSION "0.0.0"
#endif

namespace phi4 {

const char* const kVersion = PHI4_VERSION;
const char* const kFtleColumns = "alpha,seed,T,N,dt,burn_in,lambda_T,iters,residual,converged,wall_ms";
const char* const kSteerColumns = "lambda_target,kappa,phi0,f,c,lambda_measured,abs_err";
const char* const kWickColumns = "N,m,C_N,emp_var,se,zscore";

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const char* const kFailureColumns = "alpha,seed,code,message";

const std::set<std::string> kModes = {"simulate", "stationary", "ftle", "sweep", "steer", "wick-check", "besov"};

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorCode::parse, what); }

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    parse_fail(std::string("config key '") + key + "' has the wrong type");
  }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + " must be a JSON object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) parse_fail("unknown key '" + k + "' in " + where);
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream out(p, std::ios::binary | std::ios::out | mode);
  if (!out) fail(ErrorCode::io, "cannot open '" + p.string() + "' for writing");
  return out;
}

std::string ftle_row(const FtleSample& s, int cutoff, double dt, double burn_in, long long wall_ms) {
  std::ostringstream o;
  o << format_double(s.alpha) << ',' << s.seed << ',' << format_double(s.horizon) << ',' << cutoff << ','
    << format_double(dt) << ',' << format_double(burn_in) << ',' << format_double(s.lambda_T) << ','
    << s.iterations << ',' << format_double(s.residual) << ',' << (s.converged ? 1 : 0) << ',' << wall_ms;
  return o.str();
}

// ---------------------------------------------------------------------------
// Resumable CSV sinks

using JobKey = std::pair<double, std::uint64_t>;

// Drops a partial trailing line left by an interrupted run.
void truncate_partial_line(const fs::path& p) {
  if (!fs::exists(p)) return;
  std::ifstream in(p, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.empty() || content.back() == '\n') return;
  const auto last = content.rfind('\n');
  in.close();
  fs::resize_file(p, last == std::string::npos ? 0 : last + 1);
}

// Reads (alpha, seed) keys of an existing table; writes the header if the
// file is new or empty.
std::set<JobKey> load_keys(const fs::path& p, const std::string& columns) {
  std::set<JobKey> keys;
  truncate_partial_line(p);
  if (!fs::exists(p) || fs::file_size(p) == 0) {
    auto out = open_out(p);
    out << columns << '\n';
    return keys;
  }
  std::ifstream in(p, std::ios::binary);
  std::string line;
  std::getline(in, line);
  if (line != columns) fail(ErrorCode::io, "'" + p.string() + "' has an unexpected header; refusing to append");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      fail(ErrorCode::io, "malformed row in '" + p.string() + "'");
    double a = 0.0;
    std::uint64_t s = 0;
    const auto ra = std::from_chars(line.data(), line.data() + c1, a);
    const auto rs = std::from_chars(line.data() + c1 + 1, line.data() + c2, s);
    if (ra.ec != std::errc() || rs.ec != std::errc()) fail(ErrorCode::io, "malformed key in '" + p.string() + "'");
    keys.insert({a, s});
  }
  return keys;
}

// ---------------------------------------------------------------------------
// Verbs

SolverConfig with(const SolverConfig& base, double alpha, std::uint64_t seed) {
  SolverConfig c = base;
  c.alpha = alpha;
  c.seed = seed;
  return c;
}

std::vector<std::string> run_simulate(const ExperimentSpec& spec, std::ostream& log) {
  const SolverConfig& cfg = spec.solver;
  const StochasticSimulator sim(cfg);
  const TorusGrid& g = sim.grid();
  const SpectralField phi0 = spec.init == "gff" ? sample_gff(g, cfg.seed) : SpectralField(g);
  SimulationState s = sim.initial_state(phi0, InitialGaussian::stationary);

  PathFile file;
  auto& h = file.header;
  h.spacing = cfg.dt * cfg.snapshot_stride;
  h.dt = cfg.dt;
  h.horizon = cfg.horizon;
  h.alpha = cfg.alpha;
  h.mass = cfg.mass;
  h.c = sim.wick_shift();
  h.seed = cfg.seed;
  h.fields = {"phi", "z", "r"};
  for (const auto& f : h.fields) file.fields[f].spacing = h.spacing;

  auto diag = open_out(fs::path(spec.out_dir) / "diagnostics.csv");
  diag << "step,t,r_holder,r_sup,u1_norm,u2_norm\n";
  const std::int64_t steps = cfg.num_steps();
  for (std::int64_t i = 0;; ++i) {
    const WickFields w = sim.wick(s.gaussian);
    if (i % cfg.snapshot_stride == 0) {
      const auto d = diagnose(s.remainder, w, cfg, spec.split_diagnostics);
      diag << i << ',' << format_double(static_cast<double>(i) * cfg.dt) << ',' << format_double(d.r_holder) << ','
           << format_double(d.r_sup) << ',' << format_double(d.u1_norm) << ',' << format_double(d.u2_norm) << '\n';
      file.fields["phi"].snapshots.push_back(s.phi());
      file.fields["z"].snapshots.push_back(s.gaussian);
      file.fields["r"].snapshots.push_back(s.remainder);
    }
    if (i == steps) break;
    s = sim.step(s, w);
  }
  write_path_file((fs::path(spec.out_dir) / "path.csv").string(), file);
  log << "simulate: " << steps << " steps, " << file.fields["phi"].size() << " snapshots\n";
  return {"path.csv", "diagnostics.csv"};
}

std::vector<std::string> run_stationary(const ExperimentSpec& spec, std::ostream& log) {
  const SolverConfig& cfg = spec.solver;
  const StationaryRun run = sample_stationary(cfg, spec.burn_in);
  PathFile file;
  auto& h = file.header;
  h.spacing = run.phi.spacing;
  h.dt = cfg.dt;
  h.horizon = cfg.horizon;
  h.alpha = cfg.alpha;
  h.mass = cfg.mass;
  h.c = run.c;
  h.burn_in = spec.burn_in;
  h.seed = cfg.seed;
  h.fields = {"phi", "z", "q"};
  file.fields["phi"] = run.phi;
  file.fields["z"] = run.gaussian;
  file.fields["q"] = run.q;
  write_path_file((fs::path(spec.out_dir) / "path.csv").string(), file);
  log << "stationary: burn-in " << format_double(spec.burn_in) << ", " << run.q.size() << " snapshots\n";
  return {"path.csv"};
}

std::vector<std::string> run_ftle_verb(const ExperimentSpec& spec, std::ostream& log) {
  const PathFile file = read_path_file(spec.input);
  const std::string name = spec.field.empty() ? "q" : spec.field;
  const FieldPath& q = file.field(name);
  const auto& h = file.header;
  const double horizon = h.horizon > 0.0 ? h.horizon : h.spacing * static_cast<double>(q.size() - 1);
  const PotentialPath path = PotentialPath::from_field_path(q, horizon);
  const std::vector<double> alphas = spec.alphas.empty() ? std::vector<double>{h.alpha} : spec.alphas;

  auto out = open_out(fs::path(spec.out_dir) / "ftle.csv");
  out << kFtleColumns << '\n';
  for (double a : alphas) {
    const auto t0 = std::chrono::steady_clock::now();
    const FtleSample s = ftle(path, a, h.seed, spec.ftle);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    out << ftle_row(s, h.cutoff, h.dt > 0.0 ? h.dt : h.spacing, h.burn_in, spec.timing ? ms.count() : 0) << '\n';
    log << "ftle: alpha " << format_double(a) << " lambda_T " << format_double(s.lambda_T)
        << (s.converged ? "" : " (not converged)") << '\n';
  }
  return {"ftle.csv"};
}

std::vector<std::string> run_steer(const ExperimentSpec& spec, std::ostream& log) {
  const double alpha = spec.alphas.empty() ? spec.solver.alpha : spec.alphas.front();
  const auto rows = demo_support(spec.lambdas, alpha, spec.solver, spec.ftle);
  auto out = open_out(fs::path(spec.out_dir) / "steer.csv");
  out << kSteerColumns << '\n';
  for (const auto& r : rows) {
    out << format_double(r.lambda_target) << ',' << format_double(r.kappa) << ',' << format_double(r.triple.phi0)
        << ',' << format_double(r.triple.f) << ',' << format_double(r.triple.c) << ','
        << format_double(r.lambda_measured) << ',' << format_double(r.abs_err) << '\n';
    log << "steer: lambda " << format_double(r.lambda_target) << " -> " << format_double(r.lambda_measured)
        << " (|err| " << format_double(r.abs_err) << ")\n";
  }
  return {"steer.csv"};
}

std::vector<std::string> run_wick_check(const ExperimentSpec& spec, std::ostream& log) {
  const double m = spec.solver.mass;
  auto out = open_out(fs::path(spec.out_dir) / "wick_check.csv");
  out << kWickColumns << '\n';
  for (int n : spec.wick_cutoffs) {
    const TorusGrid g(spec.solver.dim, n);
    const double cn = wick_constant(g, m);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < spec.wick_samples; ++i) {
      const NoiseStream noise(spec.solver.seed, static_cast<std::uint32_t>(i), 1.0);
      const auto x = to_physical(noise.stationary_sample(g, m));
      double v = 0.0;
      for (double y : x) v += y * y;
      v /= static_cast<double>(x.size());
      sum += v;
      sumsq += v * v;
    }
    const double s = spec.wick_samples;
    const double mean = sum / s;
    const double se = std::sqrt(std::max(sumsq / s - mean * mean, 0.0) / (s - 1.0));
    const double z = (mean - cn) / se;
    out << n << ',' << format_double(m) << ',' << format_double(cn) << ',' << format_double(mean) << ','
        << format_double(se) << ',' << format_double(z) << '\n';
    log << "wick-check: N " << n << " C_N " << format_double(cn) << " z " << format_double(z) << '\n';
  }
  return {"wick_check.csv"};
}

std::vector<std::string> run_besov(const ExperimentSpec& spec, std::ostream& log) {
  const PathFile file = read_path_file(spec.input);
  const std::string name = spec.field.empty() ? file.header.fields.front() : spec.field;
  const FieldPath& p = file.field(name);
  const TorusGrid& g = p.snapshots.front().grid();
  const int top = max_block(g);
  auto out = open_out(fs::path(spec.out_dir) / "besov.csv");
  out << "index,t,field,beta,besov_norm";
  for (int j = -1; j <= top; ++j) out << ",block_" << j;
  out << '\n';
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto blocks = block_sup_norms(p.snapshots[i]);
    const double b = besov_norm(p.snapshots[i], spec.beta);
    worst = std::max(worst, b);
    out << i << ',' << format_double(p.time(i)) << ',' << name << ',' << format_double(spec.beta) << ','
        << format_double(b);
    for (double x : blocks) out << ',' << format_double(x);
    out << '\n';
  }
  log << "besov: field " << name << ", " << p.size() << " snapshots, max C^" << format_double(spec.beta)
      << " norm " << format_double(worst) << '\n';
  return {"besov.csv"};
}

void write_manifest(const ExperimentSpec& spec, const std::vector<std::string>& outputs) {
  ordered_json m;
  m["tool"] = "phi4";
  m["version"] = kVersion;
  m["mode"] = spec.mode;
  m["config"] = ordered_json::parse(spec.echo);
  m["seeds"] = spec.seeds;
  m["outputs"] = outputs;
  auto out = open_out(fs::path(spec.out_dir) / "manifest.json");
  out << m.dump(2) << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"mode", "solver", "alphas", "seeds", "burn_in", "ftle", "out_dir", "workers", "timing", "lambdas",
              "wick_check", "input", "field", "beta", "init", "split_diagnostics"},
             "config");

  ExperimentSpec s;
  if (!j.contains("mode")) parse_fail("config has no 'mode'");
  s.mode = get_as<std::string>(j["mode"], "mode");
  if (!kModes.count(s.mode)) parse_fail("unknown mode '" + s.mode + "'");

  if (j.contains("solver")) {
    const json& c = j["solver"];
    check_keys(c,
               {"dim", "cutoff", "phys_points", "dt", "horizon", "alpha", "mass", "seed", "snapshot_stride",
                "epsilon", "noise_amplitude", "noise_dt", "diag_delta"},
               "solver");
    SolverConfig& v = s.solver;
#define PHI4_READ(name) \
  if (c.contains(#name)) v.name = get_as<decltype(v.name)>(c[#name], #name);
    PHI4_READ(dim)
    PHI4_READ(cutoff)
    PHI4_READ(phys_points)
    PHI4_READ(dt)
    PHI4_READ(horizon)
    PHI4_READ(alpha)
    PHI4_READ(mass)
    PHI4_READ(seed)
    PHI4_READ(snapshot_stride)
    PHI4_READ(epsilon)
    PHI4_READ(noise_amplitude)
    PHI4_READ(noise_dt)
    PHI4_READ(diag_delta)
#undef PHI4_READ
  }
  try {
    s.solver.validate();
  } catch (const Error& e) {
    parse_fail(std::string("invalid solver settings: ") + e.what());
  }

  if (j.contains("alphas")) {
    s.alphas = get_as<std::vector<double>>(j["alphas"], "alphas");
    if (s.alphas.empty()) parse_fail("'alphas' is empty");
  }
  if (j.contains("seeds")) {
    const json& sd = j["seeds"];
    if (sd.is_array()) {
      s.seeds = get_as<std::vector<std::uint64_t>>(sd, "seeds");
    } else {
      check_keys(sd, {"first", "count"}, "seeds");
      const auto first = sd.contains("first") ? get_as<std::uint64_t>(sd["first"], "seeds.first") : s.solver.seed;
      const auto count = sd.contains("count") ? get_as<std::int64_t>(sd["count"], "seeds.count") : 1;
      if (count < 0) parse_fail("'seeds.count' must be >= 0");
      for (std::int64_t i = 0; i < count; ++i) s.seeds.push_back(first + static_cast<std::uint64_t>(i));
    }
    if (s.seeds.empty()) parse_fail("'seeds' is empty");
  } else {
    s.seeds = {s.solver.seed};
  }
  if (s.mode == "sweep" && s.alphas.empty()) s.alphas = {s.solver.alpha};

  if (j.contains("burn_in")) s.burn_in = get_as<double>(j["burn_in"], "burn_in");
  if (!(s.burn_in >= 0.0)) parse_fail("'burn_in' must be >= 0");
  const double nb = s.burn_in / s.solver.dt;
  if (std::abs(nb - std::round(nb)) > 1e-9 * std::max(1.0, nb)) parse_fail("'burn_in' must be a multiple of dt");

  if (j.contains("ftle")) {
    const json& f = j["ftle"];
    check_keys(f, {"tol", "max_iter", "krylov_tol", "krylov_dim"}, "ftle");
    if (f.contains("tol")) s.ftle.tol = get_as<double>(f["tol"], "ftle.tol");
    if (f.contains("max_iter")) s.ftle.max_iter = get_as<int>(f["max_iter"], "ftle.max_iter");
    if (f.contains("krylov_tol")) s.ftle.krylov_tol = get_as<double>(f["krylov_tol"], "ftle.krylov_tol");
    if (f.contains("krylov_dim")) s.ftle.krylov_dim = get_as<int>(f["krylov_dim"], "ftle.krylov_dim");
    if (!(s.ftle.tol > 0.0) || s.ftle.max_iter < 1 || !(s.ftle.krylov_tol > 0.0) || s.ftle.krylov_dim < 2)
      parse_fail("invalid 'ftle' settings");
  }
  if (j.contains("out_dir")) s.out_dir = get_as<std::string>(j["out_dir"], "out_dir");
  if (j.contains("workers")) s.workers = get_as<int>(j["workers"], "workers");
  if (s.workers < 1) parse_fail("'workers' must be >= 1");
  if (j.contains("timing")) s.timing = get_as<bool>(j["timing"], "timing");

  if (j.contains("lambdas")) s.lambdas = get_as<std::vector<double>>(j["lambdas"], "lambdas");
  else s.lambdas = {-5.0, -1.0, 0.0, 1.0, 5.0};
  if (s.mode == "steer" && s.lambdas.empty()) parse_fail("'lambdas' is empty");
  if (s.mode == "steer" && s.alphas.size() > 1) parse_fail("steer takes a single alpha");

  s.wick_cutoffs = {4, 8, 16};
  if (j.contains("wick_check")) {
    const json& w = j["wick_check"];
    check_keys(w, {"cutoffs", "samples"}, "wick_check");
    if (w.contains("cutoffs")) s.wick_cutoffs = get_as<std::vector<int>>(w["cutoffs"], "wick_check.cutoffs");
    if (w.contains("samples")) s.wick_samples = get_as<int>(w["samples"], "wick_check.samples");
  }
  if (s.mode == "wick-check") {
    if (s.wick_cutoffs.empty()) parse_fail("'wick_check.cutoffs' is empty");
    for (int n : s.wick_cutoffs)
      if (n < 0) parse_fail("wick-check cutoffs must be >= 0");
    if (s.wick_samples < 2) parse_fail("'wick_check.samples' must be >= 2");
  }

  if (j.contains("input")) s.input = get_as<std::string>(j["input"], "input");
  if (j.contains("field")) s.field = get_as<std::string>(j["field"], "field");
  if (j.contains("beta")) s.beta = get_as<double>(j["beta"], "beta");
  if ((s.mode == "ftle" || s.mode == "besov") && s.input.empty()) parse_fail("mode '" + s.mode + "' needs 'input'");
  if (j.contains("init")) s.init = get_as<std::string>(j["init"], "init");
  if (s.init != "zero" && s.init != "gff") parse_fail("'init' must be 'zero' or 'gff'");
  if (j.contains("split_diagnostics")) s.split_diagnostics = get_as<bool>(j["split_diagnostics"], "split_diagnostics");

  ordered_json echo;
  echo["mode"] = s.mode;
  const SolverConfig& c = s.solver;
  echo["solver"] = {{"dim", c.dim},
                    {"cutoff", c.cutoff},
                    {"phys_points", c.grid().phys_points()},
                    {"dt", c.dt},
                    {"horizon", c.horizon},
                    {"alpha", c.alpha},
                    {"mass", c.mass},
                    {"seed", c.seed},
                    {"snapshot_stride", c.snapshot_stride},
                    {"epsilon", c.epsilon},
                    {"noise_amplitude", c.noise_amplitude},
                    {"noise_dt", c.effective_noise_dt()},
                    {"diag_delta", c.diag_delta}};
  echo["alphas"] = s.alphas;
  echo["burn_in"] = s.burn_in;
  echo["ftle"] = {{"tol", s.ftle.tol},
                  {"max_iter", s.ftle.max_iter},
                  {"krylov_tol", s.ftle.krylov_tol},
                  {"krylov_dim", s.ftle.krylov_dim}};
  echo["out_dir"] = s.out_dir;
  echo["workers"] = s.workers;
  echo["timing"] = s.timing;
  if (s.mode == "steer") echo["lambdas"] = s.lambdas;
  if (s.mode == "wick-check") echo["wick_check"] = {{"cutoffs", s.wick_cutoffs}, {"samples", s.wick_samples}};
  if (!s.input.empty()) echo["input"] = s.input;
  if (!s.field.empty()) echo["field"] = s.field;
  if (s.mode == "besov") echo["beta"] = s.beta;
  if (s.mode == "simulate") {
    echo["init"] = s.init;
    echo["split_diagnostics"] = s.split_diagnostics;
  }
  s.echo = echo.dump();
  return s;
}

FtleSample sweep_job(const ExperimentSpec& spec, double alpha, std::uint64_t seed) {
  const SolverConfig cfg = with(spec.solver, alpha, seed);
  const StationaryRun run = sample_stationary(cfg, spec.burn_in);
  return ftle(PotentialPath::from_field_path(run.q, cfg.horizon), alpha, seed, spec.ftle);
}

SweepSummary run_sweep(const ExperimentSpec& spec, std::ostream& log) {
  if (spec.alphas.empty() || spec.seeds.empty()) fail(ErrorCode::invalid_argument, "empty sweep");
  const fs::path dir(spec.out_dir);
  fs::create_directories(dir);
  const fs::path table = dir / "ftle.csv";
  const fs::path failures = dir / "failures.csv";
  std::set<JobKey> done = load_keys(table, kFtleColumns);
  for (const auto& k : load_keys(failures, kFailureColumns)) done.insert(k);

  SweepSummary summary;
  std::vector<JobKey> jobs;
  for (double a : spec.alphas)
    for (std::uint64_t s : spec.seeds) {
      ++summary.total;
      if (done.count({a, s})) ++summary.skipped;
      else jobs.push_back({a, s});
    }

  struct Outcome {
    bool ok = false;
    std::string line;
  };
  std::vector<std::optional<Outcome>> results(jobs.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const auto [alpha, seed] = jobs[i];
      Outcome o;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const FtleSample s = sweep_job(spec, alpha, seed);
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
        o.ok = true;
        o.line = ftle_row(s, spec.solver.cutoff, spec.solver.dt, spec.burn_in, spec.timing ? ms : 0);
      } catch (const Error& e) {
        o.line = format_double(alpha) + ',' + std::to_string(seed) + ',' +
                 std::to_string(static_cast<int>(e.code())) + ',' + quote_csv(e.what());
      } catch (const std::exception& e) {
        o.line = format_double(alpha) + ',' + std::to_string(seed) + ',' +
                 std::to_string(static_cast<int>(ErrorCode::internal)) + ',' + quote_csv(e.what());
      }
      {
        std::lock_guard lock(mu);
        results[i] = std::move(o);
      }
      cv.notify_all();
    }
  };

  const int nthreads = std::max(1, std::min<int>(spec.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  if (!jobs.empty())
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  auto out = open_out(table, std::ios::app);
  auto fail_out = open_out(failures, std::ios::app);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Outcome o;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return results[i].has_value(); });
      o = std::move(*results[i]);
      results[i].reset();
    }
    std::ofstream& sink = o.ok ? out : fail_out;
    sink << o.line << '\n';
    sink.flush();
    if (o.ok) ++summary.completed;
    else {
      ++summary.failed;
      log << "sweep: job alpha " << format_double(jobs[i].first) << " seed " << jobs[i].second
          << " failed: " << o.line << '\n';
    }
  }
  for (auto& t : pool) t.join();
  log << "sweep: " << summary.completed << " rows written, " << summary.skipped << " already present, "
      << summary.failed << " failed\n";
  return summary;
}

void run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  fs::create_directories(spec.out_dir);
  std::vector<std::string> outputs;
  if (spec.mode == "sweep") {
    write_manifest(spec, {"ftle.csv", "failures.csv"});
    run_sweep(spec, log);
    outputs = {"ftle.csv", "failures.csv"};
  } else if (spec.mode == "simulate") {
    outputs = run_simulate(spec, log);
  } else if (spec.mode == "stationary") {
    outputs = run_stationary(spec, log);
  } else if (spec.mode == "ftle") {
    outputs = run_ftle_verb(spec, log);
  } else if (spec.mode == "steer") {
    outputs = run_steer(spec, log);
  } else if (spec.mode == "wick-check") {
    outputs = run_wick_check(spec, log);
  } else if (spec.mode == "besov") {
    outputs = run_besov(spec, log);
  } else {
    fail(ErrorCode::invalid_argument, "unknown mode '" + spec.mode + "'");
  }
  write_manifest(spec, outputs);
}

int run_config_text(const std::string& text, std::ostream& log, std::ostream& err) {
  ExperimentSpec spec;
  try {
    spec = parse_spec(text);
  } catch (const std::exception& e) {
    err << "phi4: " << e.what() << '\n';
    return 2;
  }
  try {
    run_experiment(spec, log);
  } catch (const std::exception& e) {
    err << "phi4: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace phi4
