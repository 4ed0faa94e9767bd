#include "crep/representation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crep/random.hpp"

namespace crep {

namespace {

constexpr double kUnitaryTol = 1e-8;
constexpr double kDriftTol = 1e-10;
constexpr double kFileUnitaryTol = 1e-6;

ComplexMatrix drift_corrected(ComplexMatrix w) {
  if (unitarity_residual(w) > kDriftTol) return nearest_unitary(w);
  return w;
}

}  // namespace

ConstraintLevel::ConstraintLevel(double mu) : mu_(mu) {
  if (!(mu >= 0.0 && mu <= 4.0)) throw std::invalid_argument("constraint level must lie in [0, 4]");
}

DeformationMap::DeformationMap(double t) : t_(t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("deformation parameter must lie in [0, 1]");
}

Complex DeformationMap::operator()(Complex z) const {
  const double r = std::abs(z);
  const double re = r > 0.0 ? z.real() / r : 1.0;
  const double c = std::clamp((1.0 - t_) * re, -1.0, 1.0);
  const double angle = std::acos(c);
  return std::polar(1.0, z.imag() >= 0.0 ? angle : -angle);
}

Representation::Representation(ComplexMatrix u_image, ComplexMatrix v_image)
    : u(std::move(u_image)), v(std::move(v_image)) {
  if (u.rows() == 0 || u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows())
    throw std::invalid_argument("representation images must be square matrices of equal dimension");
  if (!u.allFinite() || !v.allFinite()) throw std::invalid_argument("representation images must be finite");
  if (crep::unitarity_residual(u) > kUnitaryTol || crep::unitarity_residual(v) > kUnitaryTol)
    throw std::invalid_argument("representation images must be unitary");
}

double Representation::unitarity_residual() const {
  return std::max(crep::unitarity_residual(u), crep::unitarity_residual(v));
}

ComplexMatrix evaluate(const Representation& rep, const GroupRingElement& a) {
  const int d = rep.dim();
  const ComplexMatrix u_inv = rep.u.adjoint();
  const ComplexMatrix v_inv = rep.v.adjoint();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& [w, c] : a.terms()) {
    ComplexMatrix m = ComplexMatrix::Identity(d, d);
    for (const Letter& l : w.letters()) {
      const ComplexMatrix& g = l.gen == Generator::U ? (l.exponent > 0 ? rep.u : u_inv)
                                                     : (l.exponent > 0 ? rep.v : v_inv);
      m = m * g;
    }
    out += c * m;
  }
  return out;
}

ComplexMatrix averaging_image(const Representation& rep) {
  return rep.u + rep.u.adjoint() + rep.v + rep.v.adjoint();
}

double constraint_value(const Representation& rep) {
  const SpectralDecomposition eig = hermitian_eig(averaging_image(rep));
  const Eigen::Index n = eig.eigenvalues.size();
  return std::max(std::abs(eig.eigenvalues(0).real()), std::abs(eig.eigenvalues(n - 1).real()));
}

bool is_constrained(const Representation& rep, ConstraintLevel level, double tol) {
  return constraint_value(rep) <= level.mu() + tol;
}

Representation deform(const Representation& rep, double t) {
  const DeformationMap f(t);
  const auto g = [&f](Complex z) { return f(z); };
  Representation out;
  out.u = drift_corrected(apply_circle_function(rep.u, g));
  out.v = drift_corrected(apply_circle_function(rep.v, g));
  return out;
}

Representation retract_to(const Representation& rep, ConstraintLevel level) {
  const double m = constraint_value(rep);
  if (m <= level.mu()) return rep;
  return deform(rep, std::clamp(1.0 - level.mu() / m, 0.0, 1.0));
}

Representation one_dim_rep(double theta, double phi) {
  ComplexMatrix u(1, 1), v(1, 1);
  u(0, 0) = std::polar(1.0, theta);
  v(0, 0) = std::polar(1.0, phi);
  return Representation(std::move(u), std::move(v));
}

Representation random_constrained(int dim, ConstraintLevel level, std::uint64_t seed) {
  Representation rep(random_unitary(dim, derive_seed(seed, {1})), random_unitary(dim, derive_seed(seed, {2})));
  return retract_to(rep, level);
}

Representation zero_constrained_from(const ComplexMatrix& u) {
  if (u.rows() == 0 || u.rows() != u.cols() || unitarity_residual(u) > kUnitaryTol)
    throw std::invalid_argument("zero_constrained_from: input must be unitary");
  const ComplexMatrix k = -0.5 * (u + u.adjoint());
  const ComplexMatrix v = apply_hermitian_function(0.5 * (k + k.adjoint()), [](double x) {
    const double c = std::clamp(x, -1.0, 1.0);
    return Complex(c, std::sqrt(std::max(0.0, 1.0 - c * c)));
  });
  return Representation(u, v);
}

double distance(const Representation& a, const Representation& b) {
  return std::max(operator_norm(a.u - b.u), operator_norm(a.v - b.v));
}

// ---------------------------------------------------------------------------
// JSON files

namespace {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, int dim, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw std::invalid_argument(std::string("representation file: '") + name + "' must have dim rows");
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw std::invalid_argument(std::string("representation file: '") + name + "' must have dim columns");
    for (int c = 0; c < dim; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw std::invalid_argument("representation file: entries must be [re, im] pairs");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

std::string to_json(const Representation& rep) {
  nlohmann::json j;
  j["dim"] = rep.dim();
  j["u"] = matrix_to_json(rep.u);
  j["v"] = matrix_to_json(rep.v);
  return j.dump(1);
}

Representation representation_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("representation file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
    throw std::invalid_argument("representation file: missing integer 'dim'");
  const int dim = j["dim"].get<int>();
  if (dim < 1) throw std::invalid_argument("representation file: 'dim' must be positive");
  if (!j.contains("u") || !j.contains("v")) throw std::invalid_argument("representation file: missing 'u' or 'v'");
  ComplexMatrix u = matrix_from_json(j["u"], dim, "u");
  ComplexMatrix v = matrix_from_json(j["v"], dim, "v");
  if (!u.allFinite() || !v.allFinite() || unitarity_residual(u) > kFileUnitaryTol ||
      unitarity_residual(v) > kFileUnitaryTol)
    throw std::invalid_argument("representation file: images are not unitary to 1e-6");
  return Representation(drift_corrected(std::move(u)), drift_corrected(std::move(v)));
}

void save_representation(const Representation& rep, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json(rep) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Representation load_representation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return representation_from_json(ss.str());
}

}  // namespace crep
