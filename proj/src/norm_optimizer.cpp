#include "crep/norm_optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numbers>
#include <string>
#include <thread>

#include "crep/random.hpp"

namespace crep {

namespace {

constexpr double kFeasibleTol = 1e-8;
constexpr double kOracleTol = 1e-12;
constexpr double kMinStep = 1e-9;

struct Candidate {
  Representation start;
  int dim = 0;
};

struct AscentResult {
  Representation rep;
  double value = 0.0;
  int steps = 0;
  bool converged = false;
};

struct Objective {
  double value = 0.0;
  SingularPair pair;
};

Objective objective(const Representation& rep, const GroupRingElement& a) {
  Objective out;
  out.pair = top_singular_pair(evaluate(rep, a));
  out.value = out.pair.value;
  return out;
}

// Hermitian directions (G_U, G_V) with d‖π(a)‖ = tr(G_U H_U) + tr(G_V H_V)
// along U ↦ exp(iH_U)U, V ↦ exp(iH_V)V, from the top singular pair.
void subgradient(const Representation& rep, const GroupRingElement& a, const SingularPair& pair,
                 ComplexMatrix& grad_u, ComplexMatrix& grad_v) {
  const int d = rep.dim();
  const ComplexMatrix u_inv = rep.u.adjoint();
  const ComplexMatrix v_inv = rep.v.adjoint();
  ComplexMatrix mu = ComplexMatrix::Zero(d, d);
  ComplexMatrix mv = ComplexMatrix::Zero(d, d);
  const Complex iunit(0.0, 1.0);
  for (const auto& [w, c] : a.terms()) {
    const auto letters = w.letters();
    const std::size_t n = letters.size();
    if (n == 0) continue;
    auto image = [&](const Letter& l) -> const ComplexMatrix& {
      if (l.gen == Generator::U) return l.exponent > 0 ? rep.u : u_inv;
      return l.exponent > 0 ? rep.v : v_inv;
    };
    // suffix[k] = L_{k+1}···L_n · right
    std::vector<ComplexVector> suffix(n);
    suffix[n - 1] = pair.right;
    for (std::size_t k = n - 1; k > 0; --k) suffix[k - 1] = image(letters[k]) * suffix[k];
    // prefix = left* · L_1···L_{k-1}, as a row vector
    Eigen::RowVectorXcd prefix = pair.left.adjoint();
    for (std::size_t k = 0; k < n; ++k) {
      const Letter& l = letters[k];
      ComplexMatrix& target = l.gen == Generator::U ? mu : mv;
      if (l.exponent > 0) {
        // δL = iH·L
        target += (c * iunit) * (image(l) * suffix[k]) * prefix;
      } else {
        // δ(L⁻¹) = −i·L⁻¹·H
        target -= (c * iunit) * suffix[k] * (prefix * image(l));
      }
      prefix = prefix * image(l);
    }
  }
  grad_u = 0.5 * (mu + mu.adjoint());
  grad_v = 0.5 * (mv + mv.adjoint());
}

AscentResult ascend(const GroupRingElement& a, const Representation& start, ConstraintLevel level,
                    const OptimizerConfig& config) {
  AscentResult out;
  out.rep = is_constrained(start, level, kFeasibleTol) ? start : retract_to(start, level);
  Objective current = objective(out.rep, a);
  out.value = current.value;

  std::deque<double> gains;  // improvements of the most recent accepted steps
  double step = config.initial_step;
  ComplexMatrix gu, gv;
  for (int s = 0; s < config.max_steps; ++s) {
    out.steps = s + 1;
    subgradient(out.rep, a, current.pair, gu, gv);
    const double gnorm = std::sqrt(gu.squaredNorm() + gv.squaredNorm());
    if (!(gnorm > 1e-14)) {
      out.converged = true;
      break;
    }
    const double scale = step / gnorm;
    Representation trial;
    trial.u = exp_i_hermitian(scale * gu) * out.rep.u;
    trial.v = exp_i_hermitian(scale * gv) * out.rep.v;
    trial = retract_to(trial, level);
    Objective next = objective(trial, a);
    if (next.value > current.value) {
      gains.push_back(next.value - current.value);
      if (static_cast<int>(gains.size()) > config.stall_window) gains.pop_front();
      out.rep = std::move(trial);
      current = std::move(next);
      out.value = current.value;
      if (static_cast<int>(gains.size()) == config.stall_window) {
        double total = 0.0;
        for (double g : gains) total += g;
        if (total < config.stall_tolerance) {
          out.converged = true;
          break;
        }
      }
    } else {
      step *= 0.5;
    }
    step *= config.step_decay;
    if (step < kMinStep) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// Runs every candidate and returns the winner: max by value, ties to the
// lowest index. Results are independent of the thread count.
NormEstimate run_pool(const GroupRingElement& a, ConstraintLevel level, const OptimizerConfig& config,
                      const std::vector<Candidate>& pool) {
  std::vector<AscentResult> results(pool.size());
  const int threads = std::min<int>(resolve_threads(config), static_cast<int>(pool.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < pool.size(); ++k) results[k] = ascend(a, pool[k].start, level, config);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < pool.size(); k = next++)
          results[k] = ascend(a, pool[k].start, level, config);
      });
    }
    for (auto& w : workers) w.join();
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k)
    if (results[k].value > results[best].value) best = k;

  NormEstimate est;
  est.value = results[best].value;
  est.witness = results[best].rep;
  est.dim_used = pool[best].dim;
  est.restart_index = static_cast<int>(best);
  est.steps = results[best].steps;
  est.converged = results[best].converged;
  est.candidates = static_cast<int>(pool.size());
  return est;
}

bool has_dim_one(const OptimizerConfig& config) {
  return std::find(config.dims.begin(), config.dims.end(), 1) != config.dims.end();
}

void append_fresh_starts(std::vector<Candidate>& pool, ConstraintLevel level, const OptimizerConfig& config,
                         std::uint64_t point_tag) {
  for (int dim : config.dims) {
    for (int r = 0; r < config.restarts; ++r) {
      const std::uint64_t seed = derive_seed(config.seed, {point_tag, static_cast<std::uint64_t>(dim),
                                                           static_cast<std::uint64_t>(r)});
      pool.push_back({random_constrained(dim, level, seed), dim});
    }
  }
}

}  // namespace

void OptimizerConfig::validate() const {
  if (dims.empty()) throw std::invalid_argument("optimizer: dims must be non-empty");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("optimizer: dims must be positive");
  if (restarts < 1) throw std::invalid_argument("optimizer: restarts must be positive");
  if (max_steps < 1) throw std::invalid_argument("optimizer: max_steps must be positive");
  if (!(initial_step > 0.0)) throw std::invalid_argument("optimizer: initial_step must be positive");
  if (!(step_decay > 0.0 && step_decay < 1.0)) throw std::invalid_argument("optimizer: step_decay must lie in (0, 1)");
  if (!(stall_tolerance > 0.0)) throw std::invalid_argument("optimizer: stall_tolerance must be positive");
  if (stall_window < 1) throw std::invalid_argument("optimizer: stall_window must be positive");
  if (oracle_grid < 8) throw std::invalid_argument("optimizer: oracle_grid must be at least 8");
}

int resolve_threads(const OptimizerConfig& config) {
  if (config.threads >= 0) return config.threads;
  const char* env = std::getenv("CONSTRAINED_REP_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || n < 0) return 0;
  return static_cast<int>(std::min<long>(n, 256));
}

OracleResult one_dim_oracle_search(const GroupRingElement& a, ConstraintLevel level, int grid_n) {
  if (grid_n < 8) throw std::invalid_argument("one_dim_oracle: grid_n must be at least 8");
  const std::size_t n = static_cast<std::size_t>(grid_n);
  const std::size_t m = a.size();
  std::vector<double> angle(n), cosine(n);
  for (std::size_t j = 0; j < n; ++j) {
    angle[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    cosine[j] = std::cos(angle[j]);
  }
  std::vector<Complex> coeff;
  std::vector<int> p, q;
  for (const auto& [w, c] : a.terms()) {
    coeff.push_back(c);
    p.push_back(w.exponent_sum(Generator::U));
    q.push_back(w.exponent_sum(Generator::V));
  }
  auto character = [&](double theta, double phi) {
    Complex s{};
    for (std::size_t t = 0; t < m; ++t) s += coeff[t] * std::polar(1.0, p[t] * theta + q[t] * phi);
    return std::abs(s);
  };

  // Tables: etheta[t*n + j] = c_t·e^{i p_t θ_j}, ephi[t*n + k] = e^{i q_t φ_k}.
  std::vector<Complex> etheta(m * n), ephi(m * n);
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t j = 0; j < n; ++j) {
      etheta[t * n + j] = coeff[t] * std::polar(1.0, p[t] * angle[j]);
      ephi[t * n + j] = std::polar(1.0, q[t] * angle[j]);
    }

  OracleResult out;
  out.value = -1.0;
  const double mu = level.mu();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(2.0 * cosine[j] + 2.0 * cosine[k]) > mu + kOracleTol) continue;
      ++out.feasible_points;
      Complex s{};
      for (std::size_t t = 0; t < m; ++t) s += etheta[t * n + j] * ephi[t * n + k];
      const double val = std::abs(s);
      if (val > out.value) {
        out.value = val;
        out.theta = angle[j];
        out.phi = angle[k];
      }
    }
  }
  if (out.feasible_points == 0) {
    // Exact zero set of 2cos θ + 2cos φ: φ = π − θ.
    for (std::size_t j = 0; j < n; ++j) {
      const double theta = angle[j];
      const double phi = std::numbers::pi - theta;
      const double val = character(theta, phi);
      if (val > out.value) {
        out.value = val;
        out.theta = theta;
        out.phi = phi;
      }
    }
  }
  if (a.is_zero()) out.value = 0.0;
  return out;
}

double one_dim_oracle(const GroupRingElement& a, ConstraintLevel level, int grid_n) {
  return one_dim_oracle_search(a, level, grid_n).value;
}

NormEstimate estimate_norm(const GroupRingElement& a, ConstraintLevel level, const OptimizerConfig& config) {
  config.validate();
  if (a.is_zero()) throw std::invalid_argument("estimate_norm: element must be nonzero");
  std::vector<Candidate> pool;
  if (config.inject_oracle && has_dim_one(config)) {
    const OracleResult o = one_dim_oracle_search(a, level, config.oracle_grid);
    pool.push_back({one_dim_rep(o.theta, o.phi), 1});
  }
  append_fresh_starts(pool, level, config, 0);
  return run_pool(a, level, config, pool);
}

NormCurve norm_curve(const GroupRingElement& a, const std::vector<double>& grid, const OptimizerConfig& config) {
  config.validate();
  if (a.is_zero()) throw std::invalid_argument("norm_curve: element must be nonzero");
  if (grid.empty()) throw std::invalid_argument("norm_curve: grid must be non-empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0 && grid[k] <= 4.0)) throw std::invalid_argument("norm_curve: grid must lie in [0, 4]");
    if (k > 0 && grid[k] < grid[k - 1]) throw std::invalid_argument("norm_curve: grid must be ascending");
  }

  NormCurve curve;
  curve.element = a;
  curve.grid = grid;
  curve.pool_shared = true;
  std::vector<Representation> witnesses;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ConstraintLevel level(grid[i]);
    std::vector<Candidate> pool;
    const OracleResult o = one_dim_oracle_search(a, level, config.oracle_grid);
    curve.oracle_floor.push_back(o.value);
    if (config.inject_oracle && has_dim_one(config)) pool.push_back({one_dim_rep(o.theta, o.phi), 1});
    for (const Representation& w : witnesses) pool.push_back({w, w.dim()});
    append_fresh_starts(pool, level, config, static_cast<std::uint64_t>(i) + 1);
    NormEstimate est = run_pool(a, level, config, pool);
    witnesses.push_back(est.witness);
    curve.estimates.push_back(std::move(est));
  }
  return curve;
}

}  // namespace crep
