#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "crep/linalg.hpp"

using namespace crep;

namespace {

ComplexMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
  const ComplexMatrix a = random_matrix(n, seed);
  return (a + a.adjoint()) / 2.0;
}

double max_norm(const ComplexMatrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("hermitian_eig small cases") {
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto e = hermitian_eig(swap);
  CHECK(e.eigenvalues(0).real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.eigenvalues(1).real() == doctest::Approx(1.0).epsilon(1e-14));

  const auto id = hermitian_eig(ComplexMatrix::Identity(3, 3));
  for (int k = 0; k < 3; ++k) CHECK(id.eigenvalues(k) == Complex(1.0));

  const auto one = hermitian_eig(ComplexMatrix::Constant(1, 1, 2.5));
  CHECK(one.eigenvalues(0) == Complex(2.5));
}

TEST_CASE("hermitian_eig agrees with a self-adjoint solver") {
  for (int n : {2, 3, 5, 8, 16, 32}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const ComplexMatrix a = random_hermitian(n, 100 * n + seed);
      const auto e = hermitian_eig(a);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(a);
      CHECK((e.eigenvalues.real() - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * (1 + a.norm()));
      CHECK(max_norm(e.reconstruct() - a) <= 1e-10 * (1 + a.norm()));
      CHECK(unitarity_residual(e.eigenvectors) <= 1e-12 * n);
      for (int k = 1; k < n; ++k) CHECK(e.eigenvalues(k).real() >= e.eigenvalues(k - 1).real());
    }
  }
}

TEST_CASE("hermitian_eig handles degenerate spectra") {
  const ComplexMatrix q = random_unitary(6, 3);
  Eigen::VectorXd d(6);
  d << -1, -1, 2, 2, 2, 5;
  const ComplexMatrix a = q * d.cast<Complex>().asDiagonal() * q.adjoint();
  const auto e = hermitian_eig((a + a.adjoint()) / 2.0);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(e.eigenvalues(k).real() - d(k)) <= 1e-12);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix a(2, 2);
  a << 1, 2, 0, 1;
  CHECK_THROWS_AS(hermitian_eig(a), std::invalid_argument);
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("unitary_eig small cases") {
  ComplexMatrix w = ComplexMatrix::Zero(2, 2);
  w(0, 0) = Complex(0, 1);
  w(1, 1) = Complex(0, -1);
  const auto e = unitary_eig(w);
  std::vector<double> args;
  for (int k = 0; k < 2; ++k) args.push_back(std::arg(e.eigenvalues(k)));
  std::sort(args.begin(), args.end());
  CHECK(args[0] == doctest::Approx(-std::numbers::pi / 2));
  CHECK(args[1] == doctest::Approx(std::numbers::pi / 2));

  const Complex phase = std::polar(1.0, 0.7);
  const auto s = unitary_eig(phase * ComplexMatrix::Identity(4, 4));
  for (int k = 0; k < 4; ++k) CHECK(std::abs(s.eigenvalues(k) - phase) <= 1e-14);
}

TEST_CASE("unitary_eig recovers a constructed spectrum") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int n : {1, 2, 4, 8, 16}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix q = random_unitary(n, rng());
      ComplexVector lambda(n);
      for (int k = 0; k < n; ++k) lambda(k) = std::polar(1.0, angle(rng));
      if (n >= 4) lambda(1) = lambda(0);  // a repeated eigenvalue
      if (n >= 4) lambda(3) = std::conj(lambda(2));  // conjugate pair: equal real parts
      const ComplexMatrix w = q * lambda.asDiagonal() * q.adjoint();
      const auto e = unitary_eig(w);
      // Match as multisets by greedy nearest pairing.
      std::vector<bool> used(n, false);
      double worst = 0.0;
      for (int k = 0; k < n; ++k) {
        int best = -1;
        double bd = 1e9;
        for (int j = 0; j < n; ++j)
          if (!used[j] && std::abs(e.eigenvalues(j) - lambda(k)) < bd) bd = std::abs(e.eigenvalues(j) - lambda(k)), best = j;
        used[best] = true;
        worst = std::max(worst, bd);
      }
      CHECK(worst <= 1e-9);
      CHECK(max_norm(e.reconstruct() - w) <= 1e-10);
      CHECK(unitarity_residual(e.eigenvectors) <= 1e-10);
    }
  }
}

TEST_CASE("unitary_eig agrees with a general eigensolver") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ComplexMatrix w = random_unitary(10, 1000 + seed);
    const auto e = unitary_eig(w);
    Eigen::ComplexEigenSolver<ComplexMatrix> ref(w);
    for (int k = 0; k < 10; ++k) {
      double nearest = 1e9;
      for (int j = 0; j < 10; ++j) nearest = std::min(nearest, std::abs(ref.eigenvalues()(j) - e.eigenvalues(k)));
      CHECK(nearest <= 1e-10);
    }
  }
}

TEST_CASE("unitary_eig rejects non-unitary input") {
  CHECK_THROWS_AS(unitary_eig(2.0 * ComplexMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("operator norm examples") {
  CHECK(operator_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  CHECK(operator_norm(random_unitary(7, 5)) == doctest::Approx(1.0).epsilon(1e-12));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -1;
  CHECK(operator_norm(d) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("operator norm matches the largest singular value") {
  for (int n : {1, 2, 5, 12, 32}) {
    const ComplexMatrix a = random_matrix(n, 77 + n);
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const double ref = svd.singularValues()(0);
    CHECK(std::abs(operator_norm(a) - ref) <= 1e-12 * ref);
    const SingularPair p = top_singular_pair(a);
    CHECK(std::abs(p.value - ref) <= 1e-12 * ref);
    CHECK((a * p.right - p.value * p.left).norm() <= 1e-10 * ref);
    CHECK(p.left.norm() == doctest::Approx(1.0));
    CHECK(p.right.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("power iteration converges on well-separated spectra") {
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d.diagonal() << 5.0, 1.0, 0.5, -2.0;
  const ComplexMatrix q = random_unitary(4, 9);
  const auto r = power_iteration_norm(q * d * q.adjoint());
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(power_iteration_norm(ComplexMatrix::Zero(3, 3)).value == 0.0);
  // Kernel start: all-ones vector is annihilated, forcing a restart.
  ComplexMatrix k(2, 2);
  k << 1, -1, 1, -1;
  const auto kr = power_iteration_norm(k);
  CHECK(kr.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(kr.restarts >= 1);
}

TEST_CASE("power iteration never exceeds the true norm") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix a = random_matrix(6, seed);
    CHECK(power_iteration_norm(a).value <= operator_norm(a) * (1 + 1e-12));
  }
}

TEST_CASE("functional calculus") {
  const ComplexMatrix w = random_unitary(6, 21);
  CHECK(max_norm(apply_circle_function(w, [](Complex z) { return z; }) - w) <= 1e-10);
  CHECK(max_norm(apply_circle_function(w, [](Complex) { return Complex(1.0); }) - ComplexMatrix::Identity(6, 6)) <=
        1e-10);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = Complex(0, 1);
  d(1, 1) = -1;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = -1;
  expected(1, 1) = 1;
  CHECK(max_norm(apply_circle_function(d, [](Complex z) { return z * z; }) - expected) <= 1e-14);
}

TEST_CASE("functional calculus is multiplicative") {
  auto g = [](Complex z) { return z * z * z; };
  auto h = [](Complex z) { return std::exp(Complex(0, 1) * std::arg(z) / 2.0); };
  for (int n : {1, 3, 8, 16}) {
    const ComplexMatrix w = random_unitary(n, 300 + n);
    const ComplexMatrix gh = apply_circle_function(w, [&](Complex z) { return g(z) * h(z); });
    CHECK(max_norm(gh - apply_circle_function(w, g) * apply_circle_function(w, h)) <= 1e-8);
    // The polynomial case has a direct oracle.
    CHECK(max_norm(apply_circle_function(w, g) - w * w * w) <= 1e-10);
  }
}

TEST_CASE("exponentials and polar projection") {
  const ComplexMatrix h = random_hermitian(5, 8);
  const ComplexMatrix e = exp_i_hermitian(h);
  CHECK(unitarity_residual(e) <= 1e-12);
  CHECK(max_norm(e * exp_i_hermitian(-h) - ComplexMatrix::Identity(5, 5)) <= 1e-12);
  const ComplexMatrix w = random_unitary(5, 8);
  CHECK(max_norm(nearest_unitary(w) - w) <= 1e-12);
  const ComplexMatrix perturbed = w + 1e-6 * random_matrix(5, 9);
  const ComplexMatrix p = nearest_unitary(perturbed);
  CHECK(unitarity_residual(p) <= 1e-12);
  CHECK(max_norm(p - w) <= 1e-5);
  ComplexMatrix sq = apply_hermitian_function(h * h, [](double x) { return Complex(std::sqrt(std::max(0.0, x))); });
  CHECK(max_norm(sq * sq - h * h) <= 1e-10);
  CHECK(hermitian_residual(sq) <= 1e-12);
}

TEST_CASE("random unitaries") {
  const ComplexMatrix one = random_unitary(1, 4);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) <= 1e-14);
  for (int n : {2, 4, 8, 16, 32}) CHECK(unitarity_residual(random_unitary(n, n)) <= 1e-12);
  CHECK(random_unitary(6, 42) == random_unitary(6, 42));
  CHECK(random_unitary(6, 42) != random_unitary(6, 43));
  // Haar moment: E|W_00|² = 1/n.
  double mean = 0.0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) mean += std::norm(random_unitary(4, 5000 + t)(0, 0));
  CHECK(mean / trials == doctest::Approx(0.25).epsilon(0.08));
}
