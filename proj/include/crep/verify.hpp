#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crep/norm_optimizer.hpp"

namespace crep {

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;  // wall time of the check group; not part of the report line
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Optimizer settings for the norm checks (defaults as in OptimizerConfig).
  OptimizerConfig optimizer;
};

/// Suites: "deformation", "homotopy", "winding", "norm", "kesten", "all".
/// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options);

std::vector<std::string> suite_names();

/// "CHECK <name> PASS|FAIL residual=<value> tol=<value>"
std::string format_check(const CheckResult& r);

// Individual groups, each returning one or more checks.
std::vector<CheckResult> check_deformation_scaling(std::uint64_t seed);
std::vector<CheckResult> check_retraction(std::uint64_t seed);
std::vector<CheckResult> check_zero_constrained(std::uint64_t seed);
std::vector<CheckResult> check_x_curve(const OptimizerConfig& config);
std::vector<CheckResult> check_unitary_norm(const OptimizerConfig& config);
std::vector<CheckResult> check_oracle_agreement(const OptimizerConfig& config);
std::vector<CheckResult> check_sine_identity(std::uint64_t seed);
std::vector<CheckResult> check_endpoints(std::uint64_t seed);
std::vector<CheckResult> check_phi(int samples = 4096);
std::vector<CheckResult> check_winding(int samples = 4096);
std::vector<CheckResult> check_tau_homotopies(std::uint64_t seed);
std::vector<CheckResult> check_scalar_characters();
std::vector<CheckResult> check_kesten();
std::vector<CheckResult> check_curve_determinism(std::uint64_t seed);

/// The representation set shared by the homotopy checks: 20 constrained
/// representations, μ ∈ {1, 3} × d ∈ {2, 4}, five seeds each.
std::vector<Representation> homotopy_test_set(std::uint64_t seed);

}  // namespace crep
