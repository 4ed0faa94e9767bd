#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "crep/bundle.hpp"
#include "crep/homotopy.hpp"

using namespace crep;

namespace {

// Radial reduction of the ball: level sizes 1, 4, 12, 36, ... give a
// tridiagonal matrix with couplings 2 (levels 0-1) and √3 beyond. The top
// eigenvector of the ball is radial, so the top eigenvalues agree.
double radial_oracle(int depth) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(depth + 1, depth + 1);
  for (int k = 0; k < depth; ++k) t(k, k + 1) = t(k + 1, k) = (k == 0) ? 2.0 : std::sqrt(3.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  return es.eigenvalues().maxCoeff();
}

Eigen::MatrixXd dense_adjacency(const CayleyBall& ball) {
  const auto n = static_cast<Eigen::Index>(ball.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (auto j : ball.neighbours(static_cast<std::size_t>(k))) a(k, j) = 1.0;
  return a;
}

NormCurve fake_curve(std::vector<double> grid, std::vector<double> values) {
  NormCurve c;
  c.element = averaging_element();
  c.grid = grid;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    NormEstimate e;
    e.value = values[k];
    e.dim_used = 1 + static_cast<int>(k % 3);
    e.candidates = 10 + static_cast<int>(k);
    e.converged = k % 2 == 0;
    c.estimates.push_back(e);
    c.oracle_floor.push_back(values[k]);
  }
  c.pool_shared = true;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("Cayley ball combinatorics") {
  long expected = 1;
  for (int r = 1; r <= 10; ++r) {
    expected *= 3;
    const CayleyBall ball(r);
    CHECK(ball.vertex_count() == static_cast<std::size_t>(2 * expected - 1));
  }
  const CayleyBall ball(4);
  std::set<std::string> words;
  for (std::size_t k = 0; k < ball.vertex_count(); ++k) {
    const Word w = ball.word(k);
    CHECK(static_cast<int>(w.length()) == ball.level(k));
    words.insert(to_string(w));
    if (k > 0) CHECK(ball.level(k) >= ball.level(k - 1));  // BFS order
    const std::size_t deg = ball.degree(k);
    CHECK(deg == (k == 0 ? 4u : ball.level(k) < 4 ? 4u : 1u));
    for (auto j : ball.neighbours(k)) {
      // Neighbours differ by one generator.
      const Word ratio = w.inverse() * ball.word(static_cast<std::size_t>(j));
      CHECK(ratio.length() == 1);
    }
  }
  CHECK(words.size() == ball.vertex_count());
  CHECK_THROWS_AS(CayleyBall(0), std::invalid_argument);
  CHECK_THROWS_AS(CayleyBall(15), std::invalid_argument);
  CHECK_THROWS_AS(cayley_ball_norm(0), std::invalid_argument);
}

TEST_CASE("depth one is the five-vertex star") {
  const CayleyBall ball(1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_adjacency(ball));
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(cayley_ball_norm(1) - 2.0) <= 1e-9);
}

TEST_CASE("ball norms match dense and radial oracles") {
  for (int r = 1; r <= 5; ++r) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_adjacency(CayleyBall(r)));
    CHECK(std::abs(es.eigenvalues().maxCoeff() - radial_oracle(r)) <= 1e-10);
  }
  for (int r = 1; r <= 12; ++r) {
    CAPTURE(r);
    CHECK(std::abs(cayley_ball_norm(r) - radial_oracle(r)) <= 1e-9);
  }
}

TEST_CASE("ball norms increase toward 2√3") {
  double prev = 0.0;
  for (int r = 1; r <= 10; ++r) {
    const double v = cayley_ball_norm(r);
    CHECK(v > prev);
    CHECK(v <= kKestenBound + 1e-9);
    prev = v;
  }
  CHECK(kKestenBound - prev <= 0.2);
  CHECK(prev < kKestenBound);
  CHECK(kKestenBound == doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("multiply applies the adjacency") {
  const CayleyBall ball(3);
  const Eigen::MatrixXd a = dense_adjacency(ball);
  std::vector<double> x(ball.vertex_count()), y(ball.vertex_count());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::sin(1.0 + static_cast<double>(k));
  ball.multiply(x, y);
  const Eigen::VectorXd ref = a * Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < y.size(); ++k) CHECK(y[k] == doctest::Approx(ref(static_cast<Eigen::Index>(k))));
}

TEST_CASE("continuity reports") {
  const CurveReport r = continuity_report(fake_curve({0, 1, 2}, {0.0, 1.01, 1.9}));
  CHECK(r.monotone);
  CHECK(r.max_increment == doctest::Approx(1.01));
  CHECK(r.min_increment == doctest::Approx(0.89));
  CHECK(r.max_deviation_from_identity == doctest::Approx(0.1));
  CHECK_FALSE(continuity_report(fake_curve({0, 1}, {1.0, 0.5})).monotone);
}

TEST_CASE("CSV export") {
  const NormCurve c = fake_curve({0, 1, 2, 3, 4}, {0.0, 1.0 / 3.0, 2.0, std::sqrt(8.0), 4.0});
  const std::string csv = curve_csv(c);
  std::istringstream in(csv);
  std::string line;
  int lines = 0;
  std::getline(in, line);
  CHECK(line == "mu,estimate,dim,restarts,converged");
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 5);
  const auto rows = parse_curve_csv(csv);
  REQUIRE(rows.size() == 5);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].mu == c.grid[k]);
    CHECK(std::abs(rows[k].estimate - c.estimates[k].value) <= 1e-8 * std::max(1.0, c.estimates[k].value));
    CHECK(rows[k].dim == c.estimates[k].dim_used);
    CHECK(rows[k].restarts == c.estimates[k].candidates);
    CHECK(rows[k].converged == c.estimates[k].converged);
  }
  const auto path = std::filesystem::temp_directory_path() / "crep_test_curve.csv";
  export_csv(c, path);
  CHECK(slurp(path) == csv);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(export_csv(NormCurve{}, path), std::invalid_argument);
  CHECK_THROWS(export_csv(c, "/nonexistent-dir/curve.csv"));
  CHECK_THROWS_AS(parse_curve_csv("mu,value\n"), std::invalid_argument);
}

TEST_CASE("SVG export") {
  const NormCurve c = fake_curve({0, 1, 2, 3, 4}, {0, 1, 2, 3, 4});
  const std::string svg = curve_svg(c);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
  CHECK(svg.find("class=\"identity\"") != std::string::npos);
  CHECK(svg.find("class=\"kesten\"") != std::string::npos);
  CHECK(svg.find("class=\"estimate\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(curve_svg(c) == svg);
  const auto path = std::filesystem::temp_directory_path() / "crep_test_curve.svg";
  render_svg(c, path);
  CHECK(slurp(path) == svg);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(render_svg(NormCurve{}, path), std::invalid_argument);
}
