// phi4 command line: builds a JSON experiment description from an optional
// config file plus flags and hands it to the library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phi4/phi4.h"

namespace {

using nlohmann::ordered_json;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct Overrides {
  std::string config;
  std::string out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::string alphas;
  std::string lambdas;
  std::optional<std::int64_t> seed_count;
  std::optional<int> dim;
  std::optional<int> cutoff;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<int> stride;
  std::optional<double> burn_in;
  std::string input;
  std::string field;
  std::optional<double> beta;
  bool timing = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phi4: spectral Galerkin simulator for the renormalized Phi^4 equation on the torus"};
  app.set_version_flag("--version", std::string(phi4_version()));
  app.require_subcommand(0, 1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "JSON experiment file");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--workers", o.workers, "worker threads (default: $PHI4_WORKERS or 1)");
  app.add_option("--seed", o.seed, "base seed");

  const std::vector<std::pair<const char*, const char*>> verbs = {
      {"simulate", "stochastic trajectory from t = 0 with diagnostics"},
      {"stationary", "burn-in sample of the stationary solution and its renormalized square"},
      {"ftle", "finite-time Lyapunov exponent along a stored potential path"},
      {"sweep", "Monte Carlo sweep of FTLEs over (alpha, seed)"},
      {"steer", "realize target FTLEs with the constant steering recipe"},
      {"wick-check", "Wick constant against the empirical variance of stationary Z"},
      {"besov", "block and Besov norms of a stored field path"},
  };
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--alpha", o.alpha, "bifurcation parameter");
    sub->add_option("--alphas", o.alphas, "comma-separated list of alphas");
    sub->add_option("--lambdas", o.lambdas, "comma-separated target exponents (steer)");
    sub->add_option("--seeds", o.seed_count, "number of consecutive seeds starting at --seed (sweep)");
    sub->add_option("--dim", o.dim, "torus dimension, 1 or 2");
    sub->add_option("--cutoff", o.cutoff, "Fourier cutoff N");
    sub->add_option("--dt", o.dt, "time step");
    sub->add_option("--horizon", o.horizon, "time horizon T");
    sub->add_option("--stride", o.stride, "snapshot stride in steps");
    sub->add_option("--burn-in", o.burn_in, "burn-in time");
    sub->add_option("--input", o.input, "path file (ftle, besov)");
    sub->add_option("--field", o.field, "field name inside the path file");
    sub->add_option("--beta", o.beta, "Besov regularity (besov)");
    sub->add_flag("--timing", o.timing, "record wall-clock time per row");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ordered_json spec = ordered_json::object();
  try {
    if (!o.config.empty()) {
      std::ifstream in(o.config);
      if (!in) {
        std::cerr << "phi4: cannot read config '" << o.config << "'\n";
        return 2;
      }
      spec = ordered_json::parse(in);
      if (!spec.is_object()) throw std::invalid_argument("config must be a JSON object");
    }
    // The verb may come from the config file alone.
    if (!app.get_subcommands().empty()) spec["mode"] = app.get_subcommands().front()->get_name();
    else if (!spec.contains("mode")) throw std::invalid_argument("a subcommand is required (see --help)");
    auto& solver = spec["solver"];
    if (solver.is_null()) solver = ordered_json::object();
    if (o.seed) solver["seed"] = *o.seed;
    if (o.alpha) solver["alpha"] = *o.alpha;
    if (o.dim) solver["dim"] = *o.dim;
    if (o.cutoff) solver["cutoff"] = *o.cutoff;
    if (o.dt) solver["dt"] = *o.dt;
    if (o.horizon) solver["horizon"] = *o.horizon;
    if (o.stride) solver["snapshot_stride"] = *o.stride;
    if (!o.alphas.empty()) spec["alphas"] = parse_list(o.alphas);
    else if (o.alpha && spec.contains("alphas")) spec["alphas"] = std::vector<double>{*o.alpha};
    if (!o.lambdas.empty()) spec["lambdas"] = parse_list(o.lambdas);
    if (o.seed_count) spec["seeds"] = {{"count", *o.seed_count}};
    if (o.burn_in) spec["burn_in"] = *o.burn_in;
    if (!o.input.empty()) spec["input"] = o.input;
    if (!o.field.empty()) spec["field"] = o.field;
    if (o.beta) spec["beta"] = *o.beta;
    if (o.timing) spec["timing"] = true;
    if (!o.out.empty()) spec["out_dir"] = o.out;
    if (o.workers) {
      spec["workers"] = *o.workers;
    } else if (!spec.contains("workers")) {
      if (const char* env = std::getenv("PHI4_WORKERS")) spec["workers"] = std::stoi(env);
    }
  } catch (const std::exception& e) {
    std::cerr << "phi4: " << e.what() << '\n';
    return 2;
  }
  return phi4_run_config(spec.dump().c_str());
}
