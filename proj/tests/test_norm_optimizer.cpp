#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "crep/bundle.hpp"
#include "crep/homotopy.hpp"
#include "crep/norm_optimizer.hpp"

using namespace crep;

namespace {

OptimizerConfig quick() {
  OptimizerConfig c;
  c.dims = {1, 2, 4};
  c.restarts = 4;
  c.max_steps = 200;
  c.threads = 0;
  return c;
}

void check_sound(const GroupRingElement& a, const NormEstimate& e, double mu) {
  CHECK(constraint_value(e.witness) <= mu + 1e-8);
  CHECK(std::abs(operator_norm(evaluate(e.witness, a)) - e.value) <= 1e-9);
  CHECK(e.value <= a.l1_norm() + 1e-9);
  CHECK(e.witness.unitarity_residual() <= 1e-9);
}

}  // namespace

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.dims = {};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = OptimizerConfig{};
  c.dims = {0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = OptimizerConfig{};
  c.restarts = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = OptimizerConfig{};
  c.oracle_grid = 4;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = OptimizerConfig{};
  c.step_decay = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("one-dimensional oracle") {
  const GroupRingElement x = averaging_element();
  CHECK(std::abs(one_dim_oracle(x, ConstraintLevel(3.0), 720) - 3.0) <= 2e-2);
  for (double mu : {0.0, 1.3, 4.0})
    CHECK(one_dim_oracle(GroupRingElement(Word::generator(Generator::U)), ConstraintLevel(mu), 720) == 1.0);
  CHECK(one_dim_oracle(GroupRingElement::scalar(1.0), ConstraintLevel(0.0), 720) == doctest::Approx(1.0));
  // At μ = 0 the result lies on the curve cos θ + cos φ = 0.
  const OracleResult r = one_dim_oracle_search(parse_element("u + v"), ConstraintLevel(0.0), 720);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(std::cos(r.theta) + std::cos(r.phi)) <= 1e-9);
  // Feasibility of the reported argmax.
  for (double mu : {0.5, 2.0, 3.5}) {
    const OracleResult s = one_dim_oracle_search(parse_element("2*u*v^-1 - i*u"), ConstraintLevel(mu), 360);
    CHECK(constraint_value(one_dim_rep(s.theta, s.phi)) <= mu + 1e-12);
  }
}

TEST_CASE("oracle value matches a brute-force scan") {
  const GroupRingElement a = parse_element("u^2 - 3*v + i*u*v^-1");
  const int n = 180;
  for (double mu : {0.8, 2.2}) {
    double best = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const double th = 2 * std::numbers::pi * p / n, ph = 2 * std::numbers::pi * q / n;
        if (std::abs(2 * std::cos(th) + 2 * std::cos(ph)) > mu) continue;
        const Complex z = std::polar(1.0, 2 * th) - 3.0 * std::polar(1.0, ph) + Complex(0, 1) * std::polar(1.0, th - ph);
        best = std::max(best, std::abs(z));
      }
    CHECK(one_dim_oracle(a, ConstraintLevel(mu), n) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("estimate_norm examples") {
  const OptimizerConfig c = quick();
  const GroupRingElement u(Word::generator(Generator::U));
  for (double mu : {0.0, 1.0, 4.0}) {
    const NormEstimate e = estimate_norm(u, ConstraintLevel(mu), c);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-6));
    check_sound(u, e, mu);
  }
  const GroupRingElement x = averaging_element();
  const NormEstimate at4 = estimate_norm(x, ConstraintLevel(4.0), c);
  CHECK(std::abs(at4.value - 4.0) <= 1e-3);
  const NormEstimate at2 = estimate_norm(x, ConstraintLevel(2.0), c);
  CHECK(std::abs(at2.value - 2.0) <= 5e-2);
  check_sound(x, at2, 2.0);
  CHECK_THROWS_AS(estimate_norm(GroupRingElement(), ConstraintLevel(1.0), c), std::invalid_argument);
}

TEST_CASE("ascent finds norms invisible in one dimension") {
  // uv − vu vanishes in every one-dimensional representation; its norm in
  // the full group algebra is 2.
  const GroupRingElement a = parse_element("u*v - v*u");
  CHECK(one_dim_oracle(a, ConstraintLevel(4.0), 360) <= 1e-12);
  OptimizerConfig c = quick();
  c.dims = {2, 4};
  const NormEstimate e = estimate_norm(a, ConstraintLevel(4.0), c);
  CHECK(e.value >= 1.9);
  CHECK(e.dim_used > 1);
  check_sound(a, e, 4.0);
  // Constrained at μ = 2 the value is still a sound lower bound.
  const NormEstimate e2 = estimate_norm(a, ConstraintLevel(2.0), c);
  check_sound(a, e2, 2.0);
  CHECK(e2.value > 0.5);
}

TEST_CASE("estimate dominates the oracle when one-dimensional starts are included") {
  OptimizerConfig c = quick();
  c.dims = {1, 2};
  c.restarts = 2;
  for (const char* text : {"u + v", "u^2 - 3*v + i*u*v^-1", "u*v^-1 + v*u^-1 + 0.5"}) {
    const GroupRingElement a = parse_element(text);
    for (double mu : {0.0, 1.0, 3.0}) {
      const double floor = one_dim_oracle(a, ConstraintLevel(mu), c.oracle_grid);
      CHECK(estimate_norm(a, ConstraintLevel(mu), c).value >= floor - 1e-9);
    }
  }
}

TEST_CASE("norm curves") {
  const OptimizerConfig c = quick();
  const NormCurve xc = norm_curve(averaging_element(), {0.0, 1.0, 2.0, 3.0, 4.0}, c);
  CHECK(xc.pool_shared);
  for (std::size_t k = 0; k < xc.grid.size(); ++k) {
    CHECK(std::abs(xc.estimates[k].value - xc.grid[k]) <= 5e-2);
    check_sound(averaging_element(), xc.estimates[k], xc.grid[k]);
  }
  const CurveReport rep = continuity_report(xc);
  CHECK(rep.monotone);
  CHECK(rep.max_deviation_from_identity <= 5e-2);

  const NormCurve one = norm_curve(GroupRingElement::scalar(1.0), uniform_grid(0.0, 4.0, 5), c);
  for (const auto& e : one.estimates) CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  const CurveReport flat = continuity_report(one);
  CHECK(flat.max_increment == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.max_deviation_from_identity < 0);

  const NormCurve uv = norm_curve(parse_element("u + v"), {0.0, 4.0}, c);
  CHECK(std::abs(uv.estimates[0].value - 2.0) <= 1e-3);
  CHECK(std::abs(uv.estimates[1].value - 2.0) <= 1e-3);

  CHECK_THROWS_AS(norm_curve(averaging_element(), {1.0, 0.5}, c), std::invalid_argument);
  CHECK_THROWS_AS(norm_curve(averaging_element(), {0.0, 4.5}, c), std::invalid_argument);
}

TEST_CASE("curves are monotone for general elements") {
  OptimizerConfig c = quick();
  c.restarts = 2;
  c.max_steps = 80;
  for (const char* text : {"u*v - v*u", "u^2 + v^-1*u + 3i", "u + 2*v^-1 - u*v"}) {
    const NormCurve curve = norm_curve(parse_element(text), uniform_grid(0.0, 4.0, 9), c);
    for (std::size_t k = 1; k < curve.grid.size(); ++k) CHECK(curve.estimates[k].value >= curve.estimates[k - 1].value);
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
      CHECK(curve.estimates[k].value >= curve.oracle_floor[k] - 1e-9);
      check_sound(curve.element, curve.estimates[k], curve.grid[k]);
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  OptimizerConfig c = quick();
  c.restarts = 3;
  c.max_steps = 60;
  const GroupRingElement a = parse_element("u*v - 2*v^-1 + i*u^2");
  c.threads = 0;
  const NormEstimate seq = estimate_norm(a, ConstraintLevel(2.5), c);
  const std::string seq_csv = curve_csv(norm_curve(a, uniform_grid(0.0, 4.0, 5), c));
  for (int threads : {2, 3, 5}) {
    c.threads = threads;
    const NormEstimate par = estimate_norm(a, ConstraintLevel(2.5), c);
    CHECK(par.value == seq.value);
    CHECK(par.restart_index == seq.restart_index);
    CHECK(par.witness.u == seq.witness.u);
    CHECK(curve_csv(norm_curve(a, uniform_grid(0.0, 4.0, 5), c)) == seq_csv);
  }
}

TEST_CASE("seeds change starts but not soundness") {
  OptimizerConfig c = quick();
  c.dims = {3};
  c.inject_oracle = false;
  c.restarts = 2;
  c.max_steps = 30;
  const GroupRingElement a = parse_element("u*v - v*u");
  c.seed = 1;
  const NormEstimate e1 = estimate_norm(a, ConstraintLevel(3.0), c);
  c.seed = 2;
  const NormEstimate e2 = estimate_norm(a, ConstraintLevel(3.0), c);
  CHECK(e1.witness.u != e2.witness.u);
  check_sound(a, e1, 3.0);
  check_sound(a, e2, 3.0);
  CHECK(e1.candidates == 2);
}

TEST_CASE("thread count resolution") {
  OptimizerConfig c;
  c.threads = 3;
  CHECK(resolve_threads(c) == 3);
  c.threads = 0;
  CHECK(resolve_threads(c) <= 1);
  c.threads = -1;
  setenv("CONSTRAINED_REP_THREADS", "4", 1);
  CHECK(resolve_threads(c) == 4);
  unsetenv("CONSTRAINED_REP_THREADS");
  CHECK(resolve_threads(c) <= 1);
}
