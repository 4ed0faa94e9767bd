#pragma once

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "crep/linalg.hpp"
#include "crep/representation.hpp"

namespace crep {

/// α(z) = −Re z + i·|Im z|. Maps the circle to its upper half, Re(z + α(z)) = 0.
/// Throws std::invalid_argument unless |z| = 1 within 1e−10.
Complex alpha(Complex z);

/// α applied to a unitary matrix through its spectral decomposition.
ComplexMatrix alpha(const ComplexMatrix& w);

/// Values of a function at z_k = e^{2πik/n}, k = 0..n−1.
class CircleSamples {
 public:
  CircleSamples() = default;
  explicit CircleSamples(std::vector<Complex> values);

  static CircleSamples sample(int n, const std::function<Complex(Complex)>& f);
  static Complex point(int k, int n);

  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<Complex>& values() const { return values_; }
  Complex operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
  /// Value at the base point z_0 = 1.
  Complex at_base_point() const { return values_.front(); }

 private:
  std::vector<Complex> values_;
};

struct WindingResult {
  int winding = 0;
  double residual = 0.0;  // distance of the raw turn count from the integer
};

/// Sum of principal-branch argument increments over 2π, including the
/// closing step. Throws std::invalid_argument on a zero sample and
/// std::domain_error when a step turns by π or more (undersampled) or the
/// raw count is 0.01 or further from an integer.
WindingResult winding_number(const CircleSamples& loop);

/// A symbolic element of the wedge algebra C(S¹∨S¹), a pair (f, g) of
/// circle functions with f(1) = g(1). Built from the generators (z,1) and
/// (1,z), constants, α of a generator, sums, products and adjoints, which is
/// enough to substitute generator images exactly.
class WedgeExpr {
 public:
  enum class Kind { Constant, First, Second, Alpha, Sum, Product, Adjoint };

  static WedgeExpr constant(Complex c);
  /// (z, 1)
  static WedgeExpr first();
  /// (1, z)
  static WedgeExpr second();
  static WedgeExpr alpha_of(const WedgeExpr& e);

  friend WedgeExpr operator+(const WedgeExpr& a, const WedgeExpr& b);
  friend WedgeExpr operator*(const WedgeExpr& a, const WedgeExpr& b);
  WedgeExpr adjoint() const;

  Kind kind() const;
  Complex constant_value() const;
  WedgeExpr lhs() const;
  WedgeExpr rhs() const;

  /// Value with the first-circle coordinate set to z1 and the second to z2.
  Complex evaluate(Complex z1, Complex z2) const;

  /// (f, g) sampled at n points: f(z) = value at (z, 1), g(z) = value at (1, z).
  std::pair<CircleSamples, CircleSamples> sample(int n) const;

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit WedgeExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
};

struct WedgeEntry {
  WedgeExpr expr = WedgeExpr::constant(0.0);
  CircleSamples first;
  CircleSamples second;

  WedgeEntry() = default;
  WedgeEntry(WedgeExpr e, int n);
  /// |f(1) − g(1)|.
  double wedge_residual() const;
};

/// A 2×2 matrix over C(S¹∨S¹), entries row-major.
struct WedgeMatrix {
  std::array<WedgeEntry, 4> entries;

  const WedgeEntry& at(int row, int col) const { return entries[static_cast<std::size_t>(2 * row + col)]; }
  int samples() const { return entries[0].first.size(); }
  double wedge_residual() const;
  /// max over samples on both circles of ‖M(z)*M(z) − I‖_F.
  double unitarity_residual() const;
  /// 2×2 value on the given circle (0 or 1) at sample k.
  Eigen::Matrix2cd value(int circle, int k) const;
};

/// φ(u) = [(z,1), 0; 0, (−1, α(z))],  φ(v) = [(α(z),−1), 0; 0, (1,z)].
std::pair<WedgeMatrix, WedgeMatrix> phi_images(int n);

/// max over samples and entries of |φ(u)+φ(u)*+φ(v)+φ(v)*|.
double phi_annihilates_x_residual(const WedgeMatrix& phi_u, const WedgeMatrix& phi_v);

/// ψ: (z,1) ↦ diag(U, 1), (1,z) ↦ diag(1, V); α of a generator by functional
/// calculus. Throws std::domain_error for α of anything but a generator.
ComplexMatrix psi_apply(const WedgeExpr& e, const Representation& rep);
/// Block matrix of ψ applied entrywise (4d × 4d).
ComplexMatrix psi_apply(const WedgeMatrix& w, const Representation& rep);

struct MatrixPair {
  ComplexMatrix u;
  ComplexMatrix v;
};

/// λ_t(u) = ψ∘φ(u), λ_t(v) = R(t)·diag(α(U), −1, 1, V)·R(t)⁻¹ with R(t) the
/// rotation by t in block coordinates 1 and 4. t ∈ [0, π/2].
MatrixPair lambda_t(const Representation& rep, double t);

/// id ⊕ τ₁ ⊕ τ₂ ⊕ τ₃ as 4d × 4d images.
MatrixPair endpoint_direct_sum(const Representation& rep);

/// |‖λ_t(x)‖ − sin t·‖x‖|.
double sine_identity_residual(const Representation& rep, double t);

/// ‖λ_t(x) − M(t)⊗X‖ with M(t) = [sin²t, sin t cos t; sin t cos t, −sin²t]
/// placed in block coordinates 1 and 4, X = U+U*+V+V*.
double lambda_x_blockwise_residual(const Representation& rep, double t);

struct EndpointResiduals {
  double at_zero = 0.0;     // λ_0 vs ψ∘φ
  double at_quarter = 0.0;  // λ_{π/2} vs id ⊕ τ₁ ⊕ τ₂ ⊕ τ₃
};
EndpointResiduals lambda_endpoint_residuals(const Representation& rep);

struct PathReport {
  double max_unitarity_residual = 0.0;
  double max_constraint_excess = 0.0;  // max of constraint − ‖x‖ along the path
  double scaling_residual = 0.0;       // τ₃ path only: max |‖x_t‖ − t·‖x‖|
  double endpoint_residual = 0.0;
};

struct TauHomotopyReport {
  PathReport tau1;
  PathReport tau2;
  PathReport tau3;
  double start_value = 0.0;  // ‖U+U*+V+V*‖
};

/// τ₃ ~ τ: u_s = −s·Re V + i√(1 − s²(Re V)²), v_s likewise with U, s ∈ [0,1].
Representation tau3_path(const Representation& rep, double s);
/// τ₁ ~ τ (sign = +1) and τ₂ ~ τ (sign = −1): u_t = (±cos t + i sin t)·1,
/// v_t = (∓cos t + i sin t)·1, t ∈ [0, π/2].
Representation tau_scalar_path(int dim, int sign, double t);

/// `s_grid` holds normalized parameters in [0, 1]; scalar paths use t = s·π/2.
TauHomotopyReport tau_homotopy_check(const Representation& rep, const std::vector<double>& s_grid);

/// σ substitutes i for both wedge generators.
Complex sigma(const WedgeExpr& e);
Eigen::Matrix2cd sigma(const WedgeMatrix& w);

struct ScalarCharacterReport {
  double sigma_phi_u_residual = 0.0;  // vs diag(i, i)
  double sigma_phi_v_residual = 0.0;
  double sigma_alpha_entry_residual = 0.0;  // σ((−1, α(z))) vs i
  bool alpha_i_exact = false;
  double rho_iota_residual = 0.0;   // ρ∘ι on sample scalars
  double sigma_phi_vs_rho_sum = 0.0;  // σ∘φ vs ρ⊕ρ on sample group-ring elements
};
ScalarCharacterReport scalar_character_checks();

/// Uniform grid of `n` points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, int n);

}  // namespace crep
