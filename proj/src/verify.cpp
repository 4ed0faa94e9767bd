#include "crep/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "crep/bundle.hpp"
#include "crep/homotopy.hpp"
#include "crep/random.hpp"

namespace crep {

namespace {

CheckResult make(std::string name, double residual, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tol;
  r.passed = std::isfinite(residual) && residual <= tol;
  return r;
}

// Strict variant for bounds of the form residual < tol.
CheckResult make_strict(std::string name, double residual, double tol) {
  CheckResult r = make(std::move(name), residual, tol);
  r.passed = std::isfinite(residual) && residual < tol;
  return r;
}

std::vector<CheckResult> timed(const std::function<std::vector<CheckResult>()>& f) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<CheckResult> out = f();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : out) r.seconds = secs;
  return out;
}

void append(std::vector<CheckResult>& out, std::vector<CheckResult> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) { return operator_norm(a * b - b * a); }

}  // namespace

std::string format_check(const CheckResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "CHECK %s %s residual=%.3e tol=%.1e", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.residual, r.tolerance);
  return buf;
}

std::vector<std::string> suite_names() { return {"deformation", "homotopy", "winding", "norm", "kesten", "all"}; }

// ---------------------------------------------------------------------------
// Deformation, retraction, zero-constrained constructor

std::vector<CheckResult> check_deformation_scaling(std::uint64_t seed) {
  const int dims[] = {2, 4, 8, 16};
  const std::vector<double> ts = uniform_grid(0.0, 1.0, 21);
  double scaling = 0.0, unitarity = 0.0, commute = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int d = dims[k % 4];
    const std::uint64_t s = derive_seed(seed, {0xdef0, static_cast<std::uint64_t>(k)});
    const Representation rep(random_unitary(d, derive_seed(s, {1})), random_unitary(d, derive_seed(s, {2})));
    const double m = constraint_value(rep);
    for (double t : ts) {
      const Representation out = deform(rep, t);
      scaling = std::max(scaling, std::abs(constraint_value(out) - (1.0 - t) * m));
      unitarity = std::max(unitarity, out.unitarity_residual());
      commute = std::max({commute, commutator_norm(out.u, rep.u), commutator_norm(out.v, rep.v)});
    }
  }
  return {make("deformation_scaling", scaling, 1e-8), make("deformation_unitarity", unitarity, 1e-9),
          make("deformation_commutes", commute, 1e-9)};
}

std::vector<CheckResult> check_retraction(std::uint64_t seed) {
  const int dims[] = {2, 4, 8};
  double exact = 0.0, relation = 0.0;
  for (double mu : {0.0, 1.0, 2.0, 3.0}) {
    int found = 0;
    for (std::uint64_t k = 0; found < 100; ++k) {
      const int d = dims[k % 3];
      const std::uint64_t s = derive_seed(seed, {0x7e7, static_cast<std::uint64_t>(mu * 4), k});
      const Representation rep(random_unitary(d, derive_seed(s, {1})), random_unitary(d, derive_seed(s, {2})));
      if (constraint_value(rep) <= mu) continue;  // only infeasible starts
      ++found;
      const Representation out = retract_to(rep, ConstraintLevel(mu));
      const double c = constraint_value(out);
      exact = std::max(exact, std::abs(c - mu));
      if (mu == 0.0) relation = std::max(relation, operator_norm(averaging_image(out)));
    }
  }
  return {make("retraction_exact", exact, 1e-8), make("retraction_zero_relation", relation, 1e-8)};
}

std::vector<CheckResult> check_zero_constrained(std::uint64_t seed) {
  double unitarity = 0.0, relation = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 8;
    const ComplexMatrix u = random_unitary(d, derive_seed(seed, {0x2e40, static_cast<std::uint64_t>(k)}));
    const Representation rep = zero_constrained_from(u);
    unitarity = std::max(unitarity, rep.unitarity_residual());
    relation = std::max(relation, operator_norm(u + u.adjoint() + rep.v + rep.v.adjoint()));
  }
  return {make("zero_constrained_unitary", unitarity, 1e-9), make("zero_constrained_relation", relation, 1e-9)};
}

// ---------------------------------------------------------------------------
// Norm estimates

std::vector<CheckResult> check_x_curve(const OptimizerConfig& config) {
  const GroupRingElement x = averaging_element();
  const NormCurve curve = norm_curve(x, uniform_grid(0.0, 4.0, 17), config);
  const CurveReport report = continuity_report(curve);
  double soundness = 0.0;
  double feasibility = 0.0;
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    const NormEstimate& e = curve.estimates[k];
    soundness = std::max(soundness, std::abs(operator_norm(evaluate(e.witness, x)) - e.value));
    feasibility = std::max(feasibility, constraint_value(e.witness) - curve.grid[k]);
  }
  const double h = 0.25;
  return {make("x_curve_identity", report.max_deviation_from_identity, 5e-2),
          make("x_curve_monotone", report.monotone ? 0.0 : 1.0, 0.0),
          make("x_curve_increment", std::max(0.0, report.max_increment - h), 0.1),
          make("x_curve_witness_value", soundness, 1e-9),
          make("x_curve_witness_feasible", std::max(0.0, feasibility), 1e-8)};
}

std::vector<CheckResult> check_unitary_norm(const OptimizerConfig& config) {
  const GroupRingElement u(Word::generator(Generator::U));
  double worst = 0.0;
  for (double mu : {0.0, 2.0, 4.0}) {
    const NormEstimate e = estimate_norm(u, ConstraintLevel(mu), config);
    worst = std::max(worst, std::abs(e.value - 1.0));
  }
  return {make("unitary_norm", worst, 1e-6)};
}

std::vector<CheckResult> check_oracle_agreement(const OptimizerConfig& config) {
  const GroupRingElement x = averaging_element();
  double oracle = 0.0;
  for (double mu : {0.5, 1.5, 2.5, 3.5})
    oracle = std::max(oracle, std::abs(one_dim_oracle(x, ConstraintLevel(mu), 720) - mu));

  // Any configuration containing d = 1 must dominate the oracle.
  OptimizerConfig small = config;
  small.dims = {1, 2};
  small.restarts = std::min(config.restarts, 4);
  small.oracle_grid = 720;
  double shortfall = 0.0;
  for (const char* text : {"u + u^-1 + v + v^-1", "u + v", "2*u*v^-1 - i*u", "u^2 + v^-1*u + 3i"}) {
    const GroupRingElement a = parse_element(text);
    for (double mu : {0.5, 1.5, 2.5, 3.5}) {
      const ConstraintLevel level(mu);
      const double floor = one_dim_oracle(a, level, 720);
      const NormEstimate e = estimate_norm(a, level, small);
      shortfall = std::max(shortfall, floor - e.value);
    }
  }
  return {make("oracle_x_equals_mu", oracle, 2e-2), make("estimate_dominates_oracle", std::max(0.0, shortfall), 1e-9)};
}

std::vector<CheckResult> check_curve_determinism(std::uint64_t seed) {
  OptimizerConfig config;
  config.dims = {1, 2, 3};
  config.restarts = 3;
  config.max_steps = 60;
  config.oracle_grid = 64;
  config.seed = seed;
  const GroupRingElement a = parse_element("u*v - 2*v^-1 + i*u^2");
  const std::vector<double> grid = uniform_grid(0.0, 4.0, 5);
  config.threads = 0;
  const std::string sequential = curve_csv(norm_curve(a, grid, config));
  config.threads = 3;
  const std::string parallel = curve_csv(norm_curve(a, grid, config));
  return {make("curve_thread_independent", sequential == parallel ? 0.0 : 1.0, 0.0)};
}

// ---------------------------------------------------------------------------
// Homotopies

std::vector<Representation> homotopy_test_set(std::uint64_t seed) {
  std::vector<Representation> reps;
  for (double mu : {1.0, 3.0})
    for (int d : {2, 4})
      for (int k = 0; k < 5; ++k)
        reps.push_back(random_constrained(
            d, ConstraintLevel(mu),
            derive_seed(seed, {0x4070, static_cast<std::uint64_t>(mu), static_cast<std::uint64_t>(d),
                               static_cast<std::uint64_t>(k)})));
  return reps;
}

std::vector<CheckResult> check_sine_identity(std::uint64_t seed) {
  const std::vector<double> ts = uniform_grid(0.0, std::numbers::pi / 2, 33);
  double worst = 0.0, blockwise = 0.0;
  for (const Representation& rep : homotopy_test_set(seed))
    for (double t : ts) {
      worst = std::max(worst, sine_identity_residual(rep, t));
      blockwise = std::max(blockwise, lambda_x_blockwise_residual(rep, t));
    }
  return {make("sine_identity", worst, 1e-8), make("lambda_x_blockwise", blockwise, 1e-8)};
}

std::vector<CheckResult> check_endpoints(std::uint64_t seed) {
  double zero = 0.0, quarter = 0.0, unitarity = 0.0;
  const std::vector<double> ts = uniform_grid(0.0, std::numbers::pi / 2, 33);
  for (const Representation& rep : homotopy_test_set(seed)) {
    const EndpointResiduals r = lambda_endpoint_residuals(rep);
    zero = std::max(zero, r.at_zero);
    quarter = std::max(quarter, r.at_quarter);
    for (double t : ts) {
      const MatrixPair l = lambda_t(rep, t);
      unitarity = std::max({unitarity, unitarity_residual(l.u), unitarity_residual(l.v)});
    }
  }
  return {make("lambda_start_is_psi_phi", zero, 1e-10), make("lambda_end_is_direct_sum", quarter, 1e-10),
          make("lambda_unitary", unitarity, 1e-9)};
}

std::vector<CheckResult> check_phi(int samples) {
  const auto [phi_u, phi_v] = phi_images(samples);
  double wedge = std::max(phi_u.wedge_residual(), phi_v.wedge_residual());
  for (int n = 8; n <= 8192; n *= 2) {
    const auto [pu, pv] = phi_images(n);
    wedge = std::max({wedge, pu.wedge_residual(), pv.wedge_residual()});
  }
  return {make("phi_annihilates_x", phi_annihilates_x_residual(phi_u, phi_v), 1e-12),
          make("phi_wedge_condition", wedge, 1e-10),
          make("phi_unitary_valued", std::max(phi_u.unitarity_residual(), phi_v.unitarity_residual()), 1e-12)};
}

std::vector<CheckResult> check_winding(int samples) {
  std::vector<CheckResult> out;
  const std::pair<const char*, std::function<Complex(Complex)>> loops[] = {
      {"winding_alpha", [](Complex z) { return alpha(z); }},
      {"winding_identity", [](Complex z) { return z; }},
      {"winding_square", [](Complex z) { return z * z; }}};
  const int expected[] = {0, 1, 2};
  for (int k = 0; k < 3; ++k) {
    const WindingResult w = winding_number(CircleSamples::sample(samples, loops[k].second));
    // A wrong integer counts as a residual of at least one turn.
    const double residual = w.winding == expected[k] ? w.residual : 1.0 + w.residual;
    out.push_back(make_strict(loops[k].first, residual, 1e-3));
  }
  return out;
}

std::vector<CheckResult> check_tau_homotopies(std::uint64_t seed) {
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 33);
  double unitarity = 0.0, excess = 0.0, scaling = 0.0, endpoints = 0.0;
  for (const Representation& rep : homotopy_test_set(seed)) {
    const TauHomotopyReport r = tau_homotopy_check(rep, grid);
    for (const PathReport* p : {&r.tau1, &r.tau2, &r.tau3}) {
      unitarity = std::max(unitarity, p->max_unitarity_residual);
      excess = std::max(excess, p->max_constraint_excess);
      endpoints = std::max(endpoints, p->endpoint_residual);
    }
    scaling = std::max(scaling, r.tau3.scaling_residual);
  }
  return {make("tau_paths_unitary", unitarity, 1e-9), make("tau_paths_constrained", std::max(0.0, excess), 1e-9),
          make("tau3_scaling_law", scaling, 1e-9), make("tau_path_endpoints", endpoints, 1e-9)};
}

std::vector<CheckResult> check_scalar_characters() {
  const ScalarCharacterReport r = scalar_character_checks();
  constexpr double eps = 4 * std::numeric_limits<double>::epsilon();
  return {make("sigma_phi_u", r.sigma_phi_u_residual, eps), make("sigma_phi_v", r.sigma_phi_v_residual, eps),
          make("sigma_alpha_entry", r.sigma_alpha_entry_residual, eps),
          make("alpha_i_exact", r.alpha_i_exact ? 0.0 : 1.0, 0.0), make("rho_iota_identity", r.rho_iota_residual, eps),
          make("sigma_phi_is_rho_sum", r.sigma_phi_vs_rho_sum, 1e-12)};
}

// ---------------------------------------------------------------------------
// Cayley balls

std::vector<CheckResult> check_kesten() {
  std::vector<double> values;
  for (int r = 1; r <= 10; ++r) values.push_back(cayley_ball_norm(r));
  double increase = 0.0;  // worst violation of strict increase
  for (std::size_t k = 1; k < values.size(); ++k)
    if (!(values[k] > values[k - 1])) increase = std::max(increase, values[k - 1] - values[k] + 1e-300);
  return {make("kesten_depth1_star", std::abs(values[0] - 2.0), 1e-9),
          make("kesten_strictly_increasing", increase, 0.0),
          make("kesten_depth10_gap", kKestenBound - values.back(), 0.2),
          make_strict("kesten_depth10_below_bound", values.back() - kKestenBound, 0.0)};
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options) {
  const bool all = suite == "all";
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  OptimizerConfig config = options.optimizer;
  config.seed = options.seed;
  const std::uint64_t seed = options.seed;
  std::vector<CheckResult> out;
  if (all || suite == "deformation") {
    append(out, timed([&] { return check_deformation_scaling(seed); }));
    append(out, timed([&] { return check_retraction(seed); }));
    append(out, timed([&] { return check_zero_constrained(seed); }));
  }
  if (all || suite == "homotopy") {
    append(out, timed([&] { return check_sine_identity(seed); }));
    append(out, timed([&] { return check_endpoints(seed); }));
    append(out, timed([&] { return check_phi(); }));
    append(out, timed([&] { return check_tau_homotopies(seed); }));
    append(out, timed([&] { return check_scalar_characters(); }));
  }
  if (all || suite == "winding") append(out, timed([&] { return check_winding(); }));
  if (all || suite == "norm") {
    append(out, timed([&] { return check_x_curve(config); }));
    append(out, timed([&] { return check_unitary_norm(config); }));
    append(out, timed([&] { return check_oracle_agreement(config); }));
    append(out, timed([&] { return check_curve_determinism(seed); }));
  }
  if (all || suite == "kesten") append(out, timed([&] { return check_kesten(); }));
  return out;
}

}  // namespace crep
