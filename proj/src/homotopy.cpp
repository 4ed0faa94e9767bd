#include "crep/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crep {

namespace {

constexpr double kUnitModulusTol = 1e-10;
constexpr double kUndersampledResidual = 0.01;

Complex alpha_unchecked(Complex z) { return {-z.real(), std::abs(z.imag())}; }

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix block_diag(std::initializer_list<const ComplexMatrix*> blocks) {
  Eigen::Index n = 0;
  for (const auto* b : blocks) n += b->rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto* b : blocks) {
    out.block(at, at, b->rows(), b->cols()) = *b;
    at += b->rows();
  }
  return out;
}

// Rotation by t in block coordinates 1 and 4 of a 4×4 block matrix.
ComplexMatrix rotation(Eigen::Index d, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  ComplexMatrix r = identity(4 * d);
  const ComplexMatrix id = identity(d);
  r.block(0, 0, d, d) = c * id;
  r.block(0, 3 * d, d, d) = s * id;
  r.block(3 * d, 0, d, d) = -s * id;
  r.block(3 * d, 3 * d, d, d) = c * id;
  return r;
}

// Hermitian functional calculus of sqrt with eigenvalues clamped at 0.
ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  ComplexMatrix s = apply_hermitian_function(0.5 * (a + a.adjoint()),
                                             [](double x) { return Complex(std::sqrt(std::max(0.0, x))); });
  return 0.5 * (s + s.adjoint());
}

// -s·H + i·sqrt(I − s²H²) for Hermitian H with spectrum in [−1, 1].
ComplexMatrix upper_lift(const ComplexMatrix& h, double s) {
  const ComplexMatrix id = identity(h.rows());
  return -s * h + Complex(0.0, 1.0) * psd_sqrt(id - (s * s) * (h * h));
}

}  // namespace

// ---------------------------------------------------------------------------
// α and winding numbers

Complex alpha(Complex z) {
  if (std::abs(std::abs(z) - 1.0) > kUnitModulusTol) throw std::invalid_argument("alpha: argument must lie on the unit circle");
  return alpha_unchecked(z);
}

ComplexMatrix alpha(const ComplexMatrix& w) { return apply_circle_function(w, alpha_unchecked); }

CircleSamples::CircleSamples(std::vector<Complex> values) : values_(std::move(values)) {
  if (values_.size() < 8) throw std::invalid_argument("CircleSamples: at least 8 samples required");
}

Complex CircleSamples::point(int k, int n) {
  if (k == 0) return 1.0;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

CircleSamples CircleSamples::sample(int n, const std::function<Complex(Complex)>& f) {
  if (n < 8) throw std::invalid_argument("CircleSamples: at least 8 samples required");
  std::vector<Complex> values(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = f(point(k, n));
  return CircleSamples(std::move(values));
}

WindingResult winding_number(const CircleSamples& loop) {
  const auto& values = loop.values();
  for (const Complex& z : values)
    if (z == Complex{}) throw std::invalid_argument("winding_number: loop passes through zero");
  double total = 0.0;
  const std::size_t n = values.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = values[k];
    const Complex b = values[(k + 1) % n];
    const double step = std::arg(b / a);
    if (std::abs(step) >= std::numbers::pi) throw std::domain_error("winding_number: loop is undersampled");
    total += step;
  }
  const double turns = total / (2.0 * std::numbers::pi);
  WindingResult out;
  out.winding = static_cast<int>(std::lround(turns));
  out.residual = std::abs(turns - out.winding);
  if (out.residual >= kUndersampledResidual) throw std::domain_error("winding_number: loop is undersampled");
  return out;
}

// ---------------------------------------------------------------------------
// Wedge algebra

struct WedgeExpr::Node {
  Kind kind;
  Complex value{};
  std::shared_ptr<const Node> a{};
  std::shared_ptr<const Node> b{};
};

WedgeExpr WedgeExpr::constant(Complex c) { return WedgeExpr(std::make_shared<const Node>(Node{Kind::Constant, c})); }
WedgeExpr WedgeExpr::first() { return WedgeExpr(std::make_shared<const Node>(Node{Kind::First})); }
WedgeExpr WedgeExpr::second() { return WedgeExpr(std::make_shared<const Node>(Node{Kind::Second})); }

WedgeExpr WedgeExpr::alpha_of(const WedgeExpr& e) {
  return WedgeExpr(std::make_shared<const Node>(Node{Kind::Alpha, {}, e.node_, nullptr}));
}

WedgeExpr operator+(const WedgeExpr& a, const WedgeExpr& b) {
  using Node = WedgeExpr::Node;
  return WedgeExpr(std::make_shared<const Node>(Node{WedgeExpr::Kind::Sum, {}, a.node_, b.node_}));
}

WedgeExpr operator*(const WedgeExpr& a, const WedgeExpr& b) {
  using Node = WedgeExpr::Node;
  return WedgeExpr(std::make_shared<const Node>(Node{WedgeExpr::Kind::Product, {}, a.node_, b.node_}));
}

WedgeExpr WedgeExpr::adjoint() const {
  return WedgeExpr(std::make_shared<const Node>(Node{Kind::Adjoint, {}, node_, nullptr}));
}

WedgeExpr::Kind WedgeExpr::kind() const { return node_->kind; }
Complex WedgeExpr::constant_value() const { return node_->value; }

WedgeExpr WedgeExpr::lhs() const { return WedgeExpr(node_->a); }
WedgeExpr WedgeExpr::rhs() const { return WedgeExpr(node_->b); }

Complex WedgeExpr::evaluate(Complex z1, Complex z2) const {
  switch (node_->kind) {
    case Kind::Constant:
      return node_->value;
    case Kind::First:
      return z1;
    case Kind::Second:
      return z2;
    case Kind::Alpha:
      return alpha_unchecked(WedgeExpr(node_->a).evaluate(z1, z2));
    case Kind::Sum:
      return WedgeExpr(node_->a).evaluate(z1, z2) + WedgeExpr(node_->b).evaluate(z1, z2);
    case Kind::Product:
      return WedgeExpr(node_->a).evaluate(z1, z2) * WedgeExpr(node_->b).evaluate(z1, z2);
    case Kind::Adjoint:
      return std::conj(WedgeExpr(node_->a).evaluate(z1, z2));
  }
  return {};
}

std::pair<CircleSamples, CircleSamples> WedgeExpr::sample(int n) const {
  return {CircleSamples::sample(n, [this](Complex z) { return evaluate(z, 1.0); }),
          CircleSamples::sample(n, [this](Complex z) { return evaluate(1.0, z); })};
}

WedgeEntry::WedgeEntry(WedgeExpr e, int n) : expr(std::move(e)) {
  auto [f, g] = expr.sample(n);
  first = std::move(f);
  second = std::move(g);
}

double WedgeEntry::wedge_residual() const { return std::abs(first.at_base_point() - second.at_base_point()); }

double WedgeMatrix::wedge_residual() const {
  double r = 0.0;
  for (const auto& e : entries) r = std::max(r, e.wedge_residual());
  return r;
}

Eigen::Matrix2cd WedgeMatrix::value(int circle, int k) const {
  Eigen::Matrix2cd m;
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col) {
      const WedgeEntry& e = at(row, col);
      m(row, col) = circle == 0 ? e.first[k] : e.second[k];
    }
  return m;
}

double WedgeMatrix::unitarity_residual() const {
  double r = 0.0;
  for (int circle = 0; circle < 2; ++circle)
    for (int k = 0; k < samples(); ++k) {
      const Eigen::Matrix2cd m = value(circle, k);
      r = std::max(r, (m.adjoint() * m - Eigen::Matrix2cd::Identity()).norm());
    }
  return r;
}

std::pair<WedgeMatrix, WedgeMatrix> phi_images(int n) {
  const WedgeExpr zero = WedgeExpr::constant(0.0);
  const WedgeExpr z1 = WedgeExpr::first();
  const WedgeExpr z2 = WedgeExpr::second();
  WedgeMatrix u, v;
  // (−1, α(z)) = α((1, z)) and (α(z), −1) = α((z, 1)) since α(1) = −1.
  u.entries = {WedgeEntry(z1, n), WedgeEntry(zero, n), WedgeEntry(zero, n), WedgeEntry(WedgeExpr::alpha_of(z2), n)};
  v.entries = {WedgeEntry(WedgeExpr::alpha_of(z1), n), WedgeEntry(zero, n), WedgeEntry(zero, n), WedgeEntry(z2, n)};
  return {std::move(u), std::move(v)};
}

double phi_annihilates_x_residual(const WedgeMatrix& phi_u, const WedgeMatrix& phi_v) {
  double r = 0.0;
  for (int circle = 0; circle < 2; ++circle)
    for (int k = 0; k < phi_u.samples(); ++k) {
      const Eigen::Matrix2cd mu = phi_u.value(circle, k);
      const Eigen::Matrix2cd mv = phi_v.value(circle, k);
      const Eigen::Matrix2cd x = mu + mu.adjoint() + mv + mv.adjoint();
      r = std::max(r, x.cwiseAbs().maxCoeff());
    }
  return r;
}

ComplexMatrix psi_apply(const WedgeExpr& e, const Representation& rep) {
  const Eigen::Index d = rep.dim();
  const ComplexMatrix id = identity(d);
  switch (e.kind()) {
    case WedgeExpr::Kind::Constant:
      return e.constant_value() * identity(2 * d);
    case WedgeExpr::Kind::First:
      return block_diag({&rep.u, &id});
    case WedgeExpr::Kind::Second:
      return block_diag({&id, &rep.v});
    case WedgeExpr::Kind::Alpha: {
      const WedgeExpr inner = e.lhs();
      const ComplexMatrix minus_id = -id;
      if (inner.kind() == WedgeExpr::Kind::First) {
        const ComplexMatrix au = alpha(rep.u);
        return block_diag({&au, &minus_id});
      }
      if (inner.kind() == WedgeExpr::Kind::Second) {
        const ComplexMatrix av = alpha(rep.v);
        return block_diag({&minus_id, &av});
      }
      throw std::domain_error("psi_apply: alpha is supported only on the generators (z,1) and (1,z)");
    }
    case WedgeExpr::Kind::Sum:
      return psi_apply(e.lhs(), rep) + psi_apply(e.rhs(), rep);
    case WedgeExpr::Kind::Product:
      return psi_apply(e.lhs(), rep) * psi_apply(e.rhs(), rep);
    case WedgeExpr::Kind::Adjoint:
      return psi_apply(e.lhs(), rep).adjoint();
  }
  throw std::domain_error("psi_apply: unsupported expression");
}

ComplexMatrix psi_apply(const WedgeMatrix& w, const Representation& rep) {
  const Eigen::Index d = rep.dim();
  ComplexMatrix out(4 * d, 4 * d);
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col)
      out.block(2 * d * row, 2 * d * col, 2 * d, 2 * d) = psi_apply(w.at(row, col).expr, rep);
  return out;
}

// ---------------------------------------------------------------------------
// λ_t and its endpoints

MatrixPair lambda_t(const Representation& rep, double t) {
  if (!(t >= 0.0 && t <= std::numbers::pi / 2)) throw std::invalid_argument("lambda_t: t must lie in [0, pi/2]");
  const Eigen::Index d = rep.dim();
  const ComplexMatrix id = identity(d);
  const ComplexMatrix minus_id = -id;
  const ComplexMatrix au = alpha(rep.u);
  const ComplexMatrix av = alpha(rep.v);
  MatrixPair out;
  out.u = block_diag({&rep.u, &id, &minus_id, &av});
  const ComplexMatrix diag_v = block_diag({&au, &minus_id, &id, &rep.v});
  const ComplexMatrix r = rotation(d, t);
  out.v = r * diag_v * r.transpose();
  return out;
}

MatrixPair endpoint_direct_sum(const Representation& rep) {
  const Eigen::Index d = rep.dim();
  const ComplexMatrix id = identity(d);
  const ComplexMatrix minus_id = -id;
  const ComplexMatrix au = alpha(rep.u);
  const ComplexMatrix av = alpha(rep.v);
  // id: (U, V); τ₁: (1, −1); τ₂: (−1, 1); τ₃: (α(V), α(U)).
  return {block_diag({&rep.u, &id, &minus_id, &av}), block_diag({&rep.v, &minus_id, &id, &au})};
}

double sine_identity_residual(const Representation& rep, double t) {
  const MatrixPair l = lambda_t(rep, t);
  const ComplexMatrix x = l.u + l.u.adjoint() + l.v + l.v.adjoint();
  return std::abs(operator_norm(x) - std::sin(t) * constraint_value(rep));
}

double lambda_x_blockwise_residual(const Representation& rep, double t) {
  const Eigen::Index d = rep.dim();
  const MatrixPair l = lambda_t(rep, t);
  const ComplexMatrix x = l.u + l.u.adjoint() + l.v + l.v.adjoint();
  const ComplexMatrix base = averaging_image(rep);
  const double s = std::sin(t);
  const double c = std::cos(t);
  ComplexMatrix expected = ComplexMatrix::Zero(4 * d, 4 * d);
  expected.block(0, 0, d, d) = (s * s) * base;
  expected.block(0, 3 * d, d, d) = (s * c) * base;
  expected.block(3 * d, 0, d, d) = (s * c) * base;
  expected.block(3 * d, 3 * d, d, d) = -(s * s) * base;
  return operator_norm(x - expected);
}

EndpointResiduals lambda_endpoint_residuals(const Representation& rep) {
  const auto [phi_u, phi_v] = phi_images(8);
  const ComplexMatrix psi_phi_u = psi_apply(phi_u, rep);
  const ComplexMatrix psi_phi_v = psi_apply(phi_v, rep);
  const MatrixPair l0 = lambda_t(rep, 0.0);
  const MatrixPair lq = lambda_t(rep, std::numbers::pi / 2);
  const MatrixPair sum = endpoint_direct_sum(rep);
  EndpointResiduals out;
  out.at_zero = std::max(operator_norm(l0.u - psi_phi_u), operator_norm(l0.v - psi_phi_v));
  out.at_quarter = std::max(operator_norm(lq.u - sum.u), operator_norm(lq.v - sum.v));
  return out;
}

// ---------------------------------------------------------------------------
// τ-homotopies

Representation tau3_path(const Representation& rep, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("tau3_path: parameter must lie in [0, 1]");
  const ComplexMatrix re_u = 0.5 * (rep.u + rep.u.adjoint());
  const ComplexMatrix re_v = 0.5 * (rep.v + rep.v.adjoint());
  Representation out;
  out.u = upper_lift(re_v, s);
  out.v = upper_lift(re_u, s);
  return out;
}

Representation tau_scalar_path(int dim, int sign, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  const ComplexMatrix id = identity(dim);
  Representation out;
  out.u = Complex(sign * c, s) * id;
  out.v = Complex(-sign * c, s) * id;
  return out;
}

namespace {

void observe(PathReport& report, const Representation& rep, double bound) {
  report.max_unitarity_residual = std::max(report.max_unitarity_residual, rep.unitarity_residual());
  report.max_constraint_excess = std::max(report.max_constraint_excess, constraint_value(rep) - bound);
}

}  // namespace

TauHomotopyReport tau_homotopy_check(const Representation& rep, const std::vector<double>& s_grid) {
  TauHomotopyReport out;
  out.start_value = constraint_value(rep);
  const int d = rep.dim();
  const double bound = out.start_value;
  for (PathReport* p : {&out.tau1, &out.tau2, &out.tau3}) p->max_constraint_excess = -bound;

  for (double s : s_grid) {
    const Representation r3 = tau3_path(rep, s);
    observe(out.tau3, r3, bound);
    out.tau3.scaling_residual = std::max(out.tau3.scaling_residual, std::abs(constraint_value(r3) - s * bound));
    const double t = s * std::numbers::pi / 2;
    observe(out.tau1, tau_scalar_path(d, +1, t), bound);
    observe(out.tau2, tau_scalar_path(d, -1, t), bound);
  }

  // τ₃ path: s = 1 gives (α(V), α(U)), s = 0 gives τ = (i, i).
  const ComplexMatrix i_id = Complex(0.0, 1.0) * identity(d);
  const Representation r1 = tau3_path(rep, 1.0);
  const Representation r0 = tau3_path(rep, 0.0);
  out.tau3.endpoint_residual = std::max({operator_norm(r1.u - alpha(rep.v)), operator_norm(r1.v - alpha(rep.u)),
                                         operator_norm(r0.u - i_id), operator_norm(r0.v - i_id)});
  // Scalar paths: t = 0 gives τ₁ = (1, −1) or τ₂ = (−1, 1); t = π/2 gives τ.
  const ComplexMatrix id = identity(d);
  for (int sign : {+1, -1}) {
    PathReport& p = sign > 0 ? out.tau1 : out.tau2;
    const Representation start = tau_scalar_path(d, sign, 0.0);
    const Representation end = tau_scalar_path(d, sign, std::numbers::pi / 2);
    p.endpoint_residual = std::max({operator_norm(start.u - double(sign) * id), operator_norm(start.v + double(sign) * id),
                                    operator_norm(end.u - i_id), operator_norm(end.v - i_id)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scalar characters

Complex sigma(const WedgeExpr& e) { return e.evaluate(Complex(0.0, 1.0), Complex(0.0, 1.0)); }

Eigen::Matrix2cd sigma(const WedgeMatrix& w) {
  Eigen::Matrix2cd m;
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col) m(row, col) = sigma(w.at(row, col).expr);
  return m;
}

ScalarCharacterReport scalar_character_checks() {
  ScalarCharacterReport out;
  const Complex i(0.0, 1.0);
  const auto [phi_u, phi_v] = phi_images(8);
  const Eigen::Matrix2cd target = i * Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd su = sigma(phi_u);
  const Eigen::Matrix2cd sv = sigma(phi_v);
  out.sigma_phi_u_residual = (su - target).cwiseAbs().maxCoeff();
  out.sigma_phi_v_residual = (sv - target).cwiseAbs().maxCoeff();
  out.sigma_alpha_entry_residual = std::abs(sigma(WedgeExpr::alpha_of(WedgeExpr::second())) - i);
  out.alpha_i_exact = alpha(i) == i;

  // ρ(u) = ρ(v) = i, ι(λ) = λ·1.
  const Representation rho = one_dim_rep(std::numbers::pi / 2, std::numbers::pi / 2);
  for (Complex lambda : {Complex(1.0), Complex(-2.5, 0.75), Complex(0.0, 3.0)}) {
    const ComplexMatrix image = evaluate(rho, GroupRingElement::scalar(lambda));
    out.rho_iota_residual = std::max(out.rho_iota_residual, std::abs(image(0, 0) - lambda));
  }

  // σ∘φ as a 2-dimensional representation against ρ ⊕ ρ.
  const Representation sigma_phi{ComplexMatrix(su), ComplexMatrix(sv)};
  const ComplexMatrix rho_u = rho.u;
  const ComplexMatrix rho_v = rho.v;
  const Representation rho_sum(block_diag({&rho_u, &rho_u}), block_diag({&rho_v, &rho_v}));
  for (const char* text : {"u + u^-1 + v + v^-1", "2*u*v^-1 - i*u", "u^3*v^-2*u + 5", "(1+2i)*v*u*v^-1"}) {
    const GroupRingElement a = parse_element(text);
    out.sigma_phi_vs_rho_sum =
        std::max(out.sigma_phi_vs_rho_sum, operator_norm(evaluate(sigma_phi, a) - evaluate(rho_sum, a)));
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need at least two points");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
  grid.back() = hi;
  return grid;
}

}  // namespace crep
