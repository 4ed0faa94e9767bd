#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "crep/freegroup.hpp"
#include "crep/linalg.hpp"

namespace crep {

/// A level μ ∈ [0, 4] for the constraint ‖π(u)+π(u)*+π(v)+π(v)*‖ ≤ μ.
class ConstraintLevel {
 public:
  explicit ConstraintLevel(double mu);
  double mu() const { return mu_; }

 private:
  double mu_;
};

/// The circle map f_t, t ∈ [0, 1]:
///   f_t(e^{iθ}) = e^{+i·arccos((1−t)cos θ)} for Im ≥ 0, conjugate branch otherwise.
/// Re f_t(z) = (1−t)·Re z, so f_t(W) + f_t(W)* = (1−t)(W + W*).
class DeformationMap {
 public:
  explicit DeformationMap(double t);
  double t() const { return t_; }
  Complex operator()(Complex z) const;

 private:
  double t_;
};

/// A finite-dimensional unitary representation of F₂: images U = π(u), V = π(v).
struct Representation {
  ComplexMatrix u;
  ComplexMatrix v;

  Representation() = default;
  /// Validates shapes and unitarity (1e−8).
  Representation(ComplexMatrix u_image, ComplexMatrix v_image);

  int dim() const { return static_cast<int>(u.rows()); }
  double unitarity_residual() const;
};

/// π(a) = Σ c_w · π(w).
ComplexMatrix evaluate(const Representation& rep, const GroupRingElement& a);

/// π(u) + π(u)* + π(v) + π(v)*.
ComplexMatrix averaging_image(const Representation& rep);

/// ‖π(x)‖ for the averaging element x, always in [0, 4].
double constraint_value(const Representation& rep);

bool is_constrained(const Representation& rep, ConstraintLevel level, double tol);

/// Applies f_t to both generator images. Throws std::invalid_argument for t ∉ [0, 1].
Representation deform(const Representation& rep, double t);

/// Exact retraction onto the μ-constrained set: deform with t = 1 − μ/m when
/// m = constraint_value(rep) exceeds μ, otherwise returns `rep` unchanged.
Representation retract_to(const Representation& rep, ConstraintLevel level);

/// d = 1: u ↦ e^{iθ}, v ↦ e^{iφ}.
Representation one_dim_rep(double theta, double phi);

/// Haar pair of the given dimension, retracted onto the μ-constrained set.
Representation random_constrained(int dim, ConstraintLevel level, std::uint64_t seed);

/// V = K + i·sqrt(I − K²) with K = −(U+U*)/2, so that U + U* = −(V + V*).
Representation zero_constrained_from(const ComplexMatrix& u);

/// Max operator-norm distance of the two generator images.
double distance(const Representation& a, const Representation& b);

// Representation files: {"dim": d, "u": [[[re, im], ...], ...], "v": ...}.
std::string to_json(const Representation& rep);
/// Rejects documents whose images are not unitary to 1e−6; accepted images are
/// polar-projected onto the unitary group.
Representation representation_from_json(const std::string& text);
void save_representation(const Representation& rep, const std::filesystem::path& path);
Representation load_representation(const std::filesystem::path& path);

}  // namespace crep
