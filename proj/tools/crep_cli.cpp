// crep: estimate constrained group-ring norms, draw norm curves, run the
// verification suites and the Cayley-ball benchmark.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "crep/bundle.hpp"
#include "crep/verify.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<int>> dims;
  std::optional<int> restarts;
  std::optional<int> max_steps;
  std::optional<double> initial_step;
  std::optional<int> oracle_grid;
  std::optional<int> threads;
  std::string config_path;
  bool verbose = false;
};

template <class T>
void take(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

// Config file first, then command-line flags on top.
crep::OptimizerConfig build_config(const Overrides& o) {
  crep::OptimizerConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot read config " + o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad config file: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("bad config file: expected an object");
    try {
      take(j, "seed", c.seed);
      take(j, "dims", c.dims);
      take(j, "restarts", c.restarts);
      take(j, "max_steps", c.max_steps);
      take(j, "initial_step", c.initial_step);
      take(j, "step_decay", c.step_decay);
      take(j, "stall_tolerance", c.stall_tolerance);
      take(j, "stall_window", c.stall_window);
      take(j, "oracle_grid", c.oracle_grid);
      take(j, "inject_oracle", c.inject_oracle);
      take(j, "threads", c.threads);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad config value: ") + e.what());
    }
  }
  if (o.seed) c.seed = *o.seed;
  if (o.dims) c.dims = *o.dims;
  if (o.restarts) c.restarts = *o.restarts;
  if (o.max_steps) c.max_steps = *o.max_steps;
  if (o.initial_step) c.initial_step = *o.initial_step;
  if (o.oracle_grid) c.oracle_grid = *o.oracle_grid;
  if (o.threads) c.threads = *o.threads;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::vector<double> parse_grid(const std::string& text) {
  double lo = 0, hi = 0, step = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &tail) != 3)
    throw UsageError("grid must look like a:b:step");
  if (!(step > 0) || !(lo <= hi) || lo < 0 || hi > 4)
    throw UsageError("grid must satisfy 0 <= a <= b <= 4 and step > 0");
  const long n = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  for (long k = 0; k < n; ++k) grid.push_back(std::min(hi, lo + static_cast<double>(k) * step));
  return grid;
}

crep::GroupRingElement parse_or_usage(const std::string& text) {
  try {
    return crep::parse_element(text);
  } catch (const crep::ParseError& e) {
    throw UsageError(std::string("cannot parse element: ") + e.what());
  }
}

std::string g(double x, int digits = 12) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

void print_estimate(const crep::NormEstimate& e, double mu, bool verbose) {
  std::cout << "mu=" << g(mu) << " estimate=" << g(e.value) << " dim=" << e.dim_used << " restart=" << e.restart_index
            << " steps=" << e.steps << " candidates=" << e.candidates << " converged=" << (e.converged ? 1 : 0)
            << "\n";
  if (verbose) std::cout << "witness " << crep::to_json(e.witness) << "\n";
}

int cmd_estimate(const std::string& elem, double mu, const Overrides& o) {
  if (mu < 0 || mu > 4) throw UsageError("mu must lie in [0, 4]");
  const auto a = parse_or_usage(elem);
  if (a == crep::GroupRingElement()) throw UsageError("element is zero");
  const auto config = build_config(o);
  std::cout << "element " << crep::to_string(a) << "\n";
  print_estimate(crep::estimate_norm(a, crep::ConstraintLevel(mu), config), mu, o.verbose);
  return 0;
}

int cmd_curve(const std::string& elem, const std::string& grid_spec, const std::string& csv, const std::string& svg,
              const Overrides& o) {
  const auto a = parse_or_usage(elem);
  if (a == crep::GroupRingElement()) throw UsageError("element is zero");
  const auto grid = parse_grid(grid_spec);
  const auto config = build_config(o);
  const crep::NormCurve curve = crep::norm_curve(a, grid, config);
  const crep::CurveReport report = crep::continuity_report(curve);
  std::cout << "element " << report.label << "\n";
  for (std::size_t k = 0; k < grid.size(); ++k) print_estimate(curve.estimates[k], grid[k], o.verbose);
  std::cout << "monotone=" << (report.monotone ? 1 : 0) << " max_increment=" << g(report.max_increment) << "\n";
  if (!csv.empty()) crep::export_csv(curve, csv);
  if (!svg.empty()) crep::render_svg(curve, svg);
  return 0;
}

int cmd_verify(const std::string& suite, const Overrides& o) {
  crep::VerifyOptions options;
  options.optimizer = build_config(o);
  options.seed = options.optimizer.seed;
  std::vector<crep::CheckResult> results;
  try {
    results = crep::run_suite(suite, options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  int failed = 0;
  for (const auto& r : results) {
    std::cout << crep::format_check(r) << "\n";
    if (!r.passed) ++failed;
  }
  std::cout << (failed == 0 ? "ALL PASS" : "FAILED") << " " << results.size() - failed << "/" << results.size()
            << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_kesten(int depth) {
  if (depth < 1 || depth > 14) throw UsageError("depth must lie in [1, 14]");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", crep::cayley_ball_norm(depth));
  std::cout << buf << "\n";
  return 0;
}

int cmd_rep_gen(int dim, double mu, std::uint64_t seed, const std::string& out) {
  if (dim < 1 || dim > 64) throw UsageError("dimension must lie in [1, 64]");
  if (mu < 0 || mu > 4) throw UsageError("mu must lie in [0, 4]");
  const auto rep = crep::random_constrained(dim, crep::ConstraintLevel(mu), seed);
  crep::save_representation(rep, out);
  std::cout << "wrote " << out << " dim=" << dim << " constraint=" << g(crep::constraint_value(rep)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained representations of the free group on two generators"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::uint64_t seed = 0;
  std::vector<int> dims;
  int restarts = 0, max_steps = 0, oracle_grid = 0, threads = 0;
  double initial_step = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Base seed (default 0)");
  auto* dims_opt = app.add_option("--dims", dims, "Dimensions to search")->delimiter(',');
  auto* restarts_opt = app.add_option("--restarts", restarts, "Random starts per dimension");
  auto* steps_opt = app.add_option("--max-steps", max_steps, "Ascent steps per start");
  auto* step_opt = app.add_option("--initial-step", initial_step, "Initial ascent step");
  auto* grid_opt = app.add_option("--oracle-grid", oracle_grid, "Torus grid size for the one-dimensional oracle");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = sequential)");
  app.add_option("--config", o.config_path, "JSON file with optimizer settings")->check(CLI::ExistingFile);
  app.add_flag("-v,--verbose", o.verbose, "Print witnesses");

  std::string elem, grid_spec, csv, svg, suite = "all", out;
  double mu = 0;
  int depth = 1, dim = 2;

  auto* estimate = app.add_subcommand("estimate", "Estimate the constrained norm of an element");
  estimate->add_option("-e,--element", elem, "Group-ring element")->required();
  estimate->add_option("-m,--mu", mu, "Constraint level in [0, 4]")->required();

  auto* curve = app.add_subcommand("curve", "Norm estimates over a grid of constraint levels");
  curve->add_option("-e,--element", elem, "Group-ring element")->required();
  curve->add_option("--grid", grid_spec, "a:b:step")->required();
  curve->add_option("--csv", csv, "Write the curve as CSV");
  curve->add_option("--svg", svg, "Write the curve as SVG");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", suite, "deformation|homotopy|winding|norm|kesten|all")
      ->check(CLI::IsMember(crep::suite_names()));

  auto* kesten = app.add_subcommand("kesten", "Norm of the averaging element on a Cayley ball");
  kesten->add_option("--depth", depth, "Ball radius")->required();

  auto* rep_gen = app.add_subcommand("rep-gen", "Write a random constrained representation");
  rep_gen->add_option("-d,--dim", dim, "Dimension")->required();
  rep_gen->add_option("-m,--mu", mu, "Constraint level in [0, 4]")->required();
  rep_gen->add_option("-o,--output", out, "Output JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*seed_opt) o.seed = seed;
  if (*dims_opt) o.dims = dims;
  if (*restarts_opt) o.restarts = restarts;
  if (*steps_opt) o.max_steps = max_steps;
  if (*step_opt) o.initial_step = initial_step;
  if (*grid_opt) o.oracle_grid = oracle_grid;
  if (*threads_opt) o.threads = threads;

  try {
    if (*estimate) return cmd_estimate(elem, mu, o);
    if (*curve) return cmd_curve(elem, grid_spec, csv, svg, o);
    if (*verify) return cmd_verify(suite, o);
    if (*kesten) return cmd_kesten(depth);
    if (*rep_gen) return cmd_rep_gen(dim, mu, build_config(o).seed, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
