#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace crep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// W = Q·diag(eigenvalues)·Q* with Q unitary.
struct SpectralDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

/// Cyclic complex Jacobi. Eigenvalues are real and ascending.
///
/// Throws std::invalid_argument if `a` is not Hermitian to 1e−10·(1+‖a‖_F)
/// and NumericalError if 30 sweeps do not bring the off-diagonal Frobenius
/// mass below 1e−12·‖a‖_F.
SpectralDecomposition hermitian_eig(const ComplexMatrix& a);

/// Eigendecomposition of a unitary matrix through the commuting pair
/// H = (W+W*)/2, S = (W−W*)/2i. H is diagonalized first; inside each cluster
/// of H-eigenvalues closer than 1e−8 the compression of S is diagonalized.
/// Eigenvalues are renormalized onto the unit circle.
SpectralDecomposition unitary_eig(const ComplexMatrix& w);

/// ‖W*W − I‖_F.
double unitarity_residual(const ComplexMatrix& w);
/// ‖A − A*‖_F.
double hermitian_residual(const ComplexMatrix& a);

struct SingularPair {
  double value = 0.0;
  ComplexVector left;   // A·right = value·left
  ComplexVector right;
};

/// Largest singular value with a top singular pair. Computed from the top
/// eigenvector of A*A (dense Jacobi), value taken as ‖A·right‖.
SingularPair top_singular_pair(const ComplexMatrix& a);

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

struct PowerIterationResult {
  double value = 0.0;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
};

/// Power iteration on A*A from the normalized all-ones vector, restarted from
/// a seeded random vector if it stagnates near zero. The cap is reported
/// through `converged`, never thrown.
PowerIterationResult power_iteration_norm(const ComplexMatrix& a, double rel_tol = 1e-13,
                                          int max_iterations = 10'000);

/// Σ g(λ_k)·P_k over the spectral projections of a unitary `w`.
ComplexMatrix apply_circle_function(const ComplexMatrix& w, const std::function<Complex(Complex)>& g);
ComplexMatrix apply_circle_function(const SpectralDecomposition& eig,
                                    const std::function<Complex(Complex)>& g);

/// Σ g(λ_k)·P_k over the spectral projections of a Hermitian `a`.
ComplexMatrix apply_hermitian_function(const ComplexMatrix& a, const std::function<Complex(double)>& g);

/// exp(i·H) for Hermitian H.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h);

/// Polar projection W·(W*W)^{-1/2} onto the unitary group.
ComplexMatrix nearest_unitary(const ComplexMatrix& w);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// triangular factor's diagonal made positive real. Deterministic per seed.
ComplexMatrix random_unitary(int dim, std::uint64_t seed);

}  // namespace crep
