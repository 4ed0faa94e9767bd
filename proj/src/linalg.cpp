#include "crep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "crep/random.hpp"

namespace crep {

namespace {

constexpr int kMaxSweeps = 30;
constexpr double kJacobiTol = 1e-12;
constexpr double kHermitianTol = 1e-10;
constexpr double kUnitaryTol = 1e-8;
constexpr double kClusterGap = 1e-8;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q); accumulates into q.
void rotate(ComplexMatrix& a, ComplexMatrix& vecs, Eigen::Index p, Eigen::Index q) {
  const Complex b = a(p, q);
  const double absb = std::abs(b);
  if (absb == 0.0) return;
  const Complex phase = b / absb;
  const Complex phase_c = std::conj(phase);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * absb);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // G = [[c, s], [-s·conj(phase), c·conj(phase)]] on coordinates (p, q).
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s * phase_c * akq;
    a(k, q) = s * akp + c * phase_c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s * phase * aqk;
    a(q, k) = s * apk + c * phase * aqk;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = vecs(k, p);
    const Complex vkq = vecs(k, q);
    vecs(k, p) = c * vkp - s * phase_c * vkq;
    vecs(k, q) = s * vkp + c * phase_c * vkq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

SpectralDecomposition jacobi_eig(ComplexMatrix a) {
  const Eigen::Index n = a.rows();
  ComplexMatrix vecs = ComplexMatrix::Identity(n, n);
  const double tol = kJacobiTol * a.norm();
  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, vecs, p, q);
  }
  if (!converged) throw NumericalError("hermitian_eig: Jacobi sweep budget exhausted");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = vecs.col(order[k]);
  }
  return out;
}

}  // namespace

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

double unitarity_residual(const ComplexMatrix& w) {
  return (w.adjoint() * w - ComplexMatrix::Identity(w.rows(), w.cols())).norm();
}

double hermitian_residual(const ComplexMatrix& a) { return (a - a.adjoint()).norm(); }

SpectralDecomposition hermitian_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("hermitian_eig: matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("hermitian_eig: non-finite entries");
  if (hermitian_residual(a) > kHermitianTol * (1.0 + a.norm()))
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  return jacobi_eig(sym);
}

SpectralDecomposition unitary_eig(const ComplexMatrix& w) {
  if (w.rows() != w.cols() || w.rows() == 0) throw std::invalid_argument("unitary_eig: matrix must be square");
  if (!w.allFinite() || unitarity_residual(w) > kUnitaryTol)
    throw std::invalid_argument("unitary_eig: matrix is not unitary");
  const Eigen::Index n = w.rows();
  const ComplexMatrix h = 0.5 * (w + w.adjoint());
  const ComplexMatrix s = (w - w.adjoint()) / Complex(0.0, 2.0);

  SpectralDecomposition he = jacobi_eig(0.5 * (h + h.adjoint()));
  ComplexMatrix q = he.eigenvectors;

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && he.eigenvalues(end).real() - he.eigenvalues(end - 1).real() <= kClusterGap) ++end;
    const Eigen::Index size = end - start;
    if (size > 1) {
      const ComplexMatrix qc = q.middleCols(start, size);
      ComplexMatrix sc = qc.adjoint() * s * qc;
      sc = 0.5 * (sc + sc.adjoint());
      const SpectralDecomposition se = jacobi_eig(sc);
      q.middleCols(start, size) = qc * se.eigenvectors;
    }
    start = end;
  }

  SpectralDecomposition out;
  out.eigenvectors = q;
  out.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex lambda = q.col(k).dot(w * q.col(k));
    const double r = std::abs(lambda);
    out.eigenvalues(k) = r > 0.0 ? lambda / r : Complex(1.0);
  }
  return out;
}

SingularPair top_singular_pair(const ComplexMatrix& a) {
  const Eigen::Index n = a.cols();
  SingularPair out;
  if (n == 0) return out;
  const ComplexMatrix gram = a.adjoint() * a;
  const SpectralDecomposition eig = jacobi_eig(0.5 * (gram + gram.adjoint()));
  out.right = eig.eigenvectors.col(n - 1);
  const ComplexVector image = a * out.right;
  out.value = image.norm();
  if (out.value > 0.0) {
    out.left = image / out.value;
  } else {
    out.left = ComplexVector::Zero(a.rows());
    if (a.rows() > 0) out.left(0) = 1.0;
  }
  return out;
}

double operator_norm(const ComplexMatrix& a) { return top_singular_pair(a).value; }

PowerIterationResult power_iteration_norm(const ComplexMatrix& a, double rel_tol, int max_iterations) {
  PowerIterationResult out;
  const Eigen::Index n = a.cols();
  if (n == 0 || a.norm() == 0.0) {
    out.converged = true;
    return out;
  }
  ComplexVector x = ComplexVector::Ones(n) / std::sqrt(static_cast<double>(n));
  std::mt19937_64 rng(derive_seed(static_cast<std::uint64_t>(n), {0x5eedULL}));
  std::normal_distribution<double> normal;
  double rho = 0.0;
  int stable = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const ComplexVector y = a * x;
    const ComplexVector z = a.adjoint() * y;
    const double next = y.squaredNorm();
    out.iterations = it + 1;
    const double zn = z.norm();
    if (zn == 0.0 || next <= 1e-300) {
      // Start vector landed in the kernel: restart from a random direction.
      for (Eigen::Index k = 0; k < n; ++k) x(k) = Complex(normal(rng), normal(rng));
      x.normalize();
      ++out.restarts;
      stable = 0;
      rho = 0.0;
      continue;
    }
    stable = std::abs(next - rho) <= rel_tol * next ? stable + 1 : 0;
    rho = next;
    x = z / zn;
    if (stable >= 3) {
      out.converged = true;
      break;
    }
  }
  out.value = std::sqrt(rho);
  return out;
}

ComplexMatrix apply_circle_function(const SpectralDecomposition& eig, const std::function<Complex(Complex)>& g) {
  ComplexVector values(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) values(k) = g(eig.eigenvalues(k));
  return eig.eigenvectors * values.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix apply_circle_function(const ComplexMatrix& w, const std::function<Complex(Complex)>& g) {
  return apply_circle_function(unitary_eig(w), g);
}

ComplexMatrix apply_hermitian_function(const ComplexMatrix& a, const std::function<Complex(double)>& g) {
  const SpectralDecomposition eig = hermitian_eig(a);
  ComplexVector values(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) values(k) = g(eig.eigenvalues(k).real());
  return eig.eigenvectors * values.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  return apply_hermitian_function(h, [](double x) { return std::polar(1.0, x); });
}

ComplexMatrix nearest_unitary(const ComplexMatrix& w) {
  const ComplexMatrix gram = w.adjoint() * w;
  const ComplexMatrix inv_sqrt = apply_hermitian_function(0.5 * (gram + gram.adjoint()), [](double x) {
    if (x <= 0.0) throw NumericalError("nearest_unitary: singular matrix");
    return Complex(1.0 / std::sqrt(x));
  });
  return w * inv_sqrt;
}

ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_unitary: dim must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  const Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(k) *= d / ad;
  }
  return q;
}

}  // namespace crep
