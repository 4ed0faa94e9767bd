#pragma once

#include <cstdint>
#include <vector>

#include "crep/freegroup.hpp"
#include "crep/representation.hpp"

namespace crep {

struct OptimizerConfig {
  std::vector<int> dims{1, 2, 4, 8};
  int restarts = 16;  // per dimension
  int max_steps = 500;
  double initial_step = 0.1;
  double step_decay = 0.97;
  double stall_tolerance = 1e-7;  // total improvement over the stall window
  int stall_window = 25;          // accepted steps
  int oracle_grid = 720;
  bool inject_oracle = true;  // seed the pool with the one-dimensional argmax
  std::uint64_t seed = 0;
  /// Worker threads for restarts. Negative: read CONSTRAINED_REP_THREADS
  /// (unset means sequential); 0 or 1: sequential.
  int threads = -1;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

/// A certified lower bound for ‖a‖_μ: value = ‖π(a)‖ for a feasible witness π.
struct NormEstimate {
  double value = 0.0;
  Representation witness;
  int dim_used = 0;
  int restart_index = 0;  // position of the winning start in the candidate pool
  int steps = 0;
  bool converged = false;
  int candidates = 0;  // number of starts tried
};

struct NormCurve {
  GroupRingElement element;
  std::vector<double> grid;
  std::vector<NormEstimate> estimates;
  std::vector<double> oracle_floor;  // one_dim_oracle value per grid point
  bool pool_shared = false;
};

struct OracleResult {
  double value = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  long feasible_points = 0;  // 0 means the μ = 0 curve fallback was used
};

/// Exhaustive search over one-dimensional representations u ↦ e^{iθ}, v ↦ e^{iφ}
/// on a grid_n × grid_n torus grid, restricted to |2cos θ + 2cos φ| ≤ μ.
/// A word w contributes e^{i(p_w θ + q_w φ)} with p_w, q_w its exponent sums.
OracleResult one_dim_oracle_search(const GroupRingElement& a, ConstraintLevel level, int grid_n);
double one_dim_oracle(const GroupRingElement& a, ConstraintLevel level, int grid_n);

/// Multi-start projected subgradient ascent of ‖π(a)‖ over μ-constrained pairs
/// of unitaries, retracting with f_t after every step.
NormEstimate estimate_norm(const GroupRingElement& a, ConstraintLevel level, const OptimizerConfig& config);

/// Estimates along an ascending μ grid with a shared witness pool: witnesses
/// found at earlier (smaller) μ are feasible at later points and seed them, so
/// the curve is non-decreasing by construction.
NormCurve norm_curve(const GroupRingElement& a, const std::vector<double>& grid, const OptimizerConfig& config);

/// Thread count implied by `config.threads` and the environment.
int resolve_threads(const OptimizerConfig& config);

}  // namespace crep
