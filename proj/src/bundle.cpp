#include "crep/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crep {

namespace {

constexpr int kMaxDepth = 14;

std::string format_g9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string format_fixed(double x, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Letter letter_from_code(int code) {
  return {code < 2 ? Generator::U : Generator::V, (code & 1) ? -1 : 1};
}

}  // namespace

// ---------------------------------------------------------------------------
// Curve reports

CurveReport continuity_report(const NormCurve& curve) {
  CurveReport r;
  r.label = to_string(curve.element);
  r.grid = curve.grid;
  r.oracle_floor = curve.oracle_floor;
  for (const auto& e : curve.estimates) r.estimates.push_back(e.value);
  r.monotone = true;
  for (std::size_t k = 1; k < r.estimates.size(); ++k) {
    const double inc = r.estimates[k] - r.estimates[k - 1];
    if (k == 1 || inc > r.max_increment) r.max_increment = inc;
    if (k == 1 || inc < r.min_increment) r.min_increment = inc;
    if (r.estimates[k] < r.estimates[k - 1]) r.monotone = false;
  }
  if (curve.element == averaging_element()) {
    r.max_deviation_from_identity = 0.0;
    for (std::size_t k = 0; k < r.estimates.size(); ++k)
      r.max_deviation_from_identity = std::max(r.max_deviation_from_identity, std::abs(r.estimates[k] - r.grid[k]));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cayley balls

CayleyBall::CayleyBall(int depth) : depth_(depth) {
  if (depth < 1 || depth > kMaxDepth) throw std::invalid_argument("CayleyBall: depth must lie in [1, 14]");
  std::size_t count = 1;
  for (int k = 0; k < depth; ++k) count *= 3;
  count = 2 * count - 1;
  parent_.reserve(count);
  last_letter_.reserve(count);
  level_.reserve(count);
  std::vector<std::size_t> first_child;
  std::vector<std::uint8_t> child_count;
  first_child.reserve(count);
  child_count.reserve(count);

  parent_.push_back(-1);
  last_letter_.push_back(-1);
  level_.push_back(0);
  for (std::size_t k = 0; k < parent_.size(); ++k) {
    first_child.push_back(parent_.size());
    std::uint8_t children = 0;
    if (level_[k] < depth) {
      for (int code = 0; code < 4; ++code) {
        if (last_letter_[k] >= 0 && code == (last_letter_[k] ^ 1)) continue;  // would cancel
        parent_.push_back(static_cast<std::int32_t>(k));
        last_letter_.push_back(static_cast<std::int8_t>(code));
        level_.push_back(static_cast<std::int8_t>(level_[k] + 1));
        ++children;
      }
    }
    child_count.push_back(children);
  }

  const std::size_t n = parent_.size();
  offsets_.resize(n + 1);
  offsets_[0] = 0;
  for (std::size_t k = 0; k < n; ++k) offsets_[k + 1] = offsets_[k] + (k > 0 ? 1 : 0) + child_count[k];
  adjacency_.resize(offsets_[n]);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t at = offsets_[k];
    if (k > 0) adjacency_[at++] = parent_[k];
    for (std::uint8_t c = 0; c < child_count[k]; ++c)
      adjacency_[at++] = static_cast<std::int32_t>(first_child[k] + c);
  }
}

std::span<const std::int32_t> CayleyBall::neighbours(std::size_t k) const {
  return {adjacency_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
}

Word CayleyBall::word(std::size_t k) const {
  std::vector<Letter> letters;
  for (std::int64_t at = static_cast<std::int64_t>(k); at > 0; at = parent_[static_cast<std::size_t>(at)])
    letters.push_back(letter_from_code(last_letter_[static_cast<std::size_t>(at)]));
  std::reverse(letters.begin(), letters.end());
  return Word(letters);
}

void CayleyBall::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = vertex_count();
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t e = offsets_[k]; e < offsets_[k + 1]; ++e) s += x[static_cast<std::size_t>(adjacency_[e])];
    y[k] = s;
  }
}

double cayley_ball_norm(int depth) {
  const CayleyBall ball(depth);
  const std::size_t n = ball.vertex_count();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n), z(n);
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
  };
  double lambda = 0.0;
  int stable = 0;
  for (int it = 0; it < 100'000; ++it) {
    ball.multiply(x, y);
    const double next = norm(y);  // sqrt(x·A²x) for unit x
    ball.multiply(y, z);
    const double zn = norm(z);
    for (std::size_t k = 0; k < n; ++k) x[k] = z[k] / zn;
    stable = std::abs(next - lambda) <= 1e-13 * next ? stable + 1 : 0;
    lambda = next;
    if (stable >= 2) break;
  }
  return lambda;
}

// ---------------------------------------------------------------------------
// CSV and SVG

std::string curve_csv(const NormCurve& curve) {
  std::string out = "mu,estimate,dim,restarts,converged\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    const NormEstimate& e = curve.estimates[k];
    out += format_g9(curve.grid[k]) + "," + format_g9(e.value) + "," + std::to_string(e.dim_used) + "," +
           std::to_string(e.candidates) + "," + (e.converged ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<CsvRow> parse_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "mu,estimate,dim,restarts,converged")
    throw std::invalid_argument("curve CSV: bad header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CsvRow r;
    int converged = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%d,%d,%d", &r.mu, &r.estimate, &r.dim, &r.restarts, &converged) != 5)
      throw std::invalid_argument("curve CSV: malformed row '" + line + "'");
    r.converged = converged != 0;
    rows.push_back(r);
  }
  return rows;
}

void export_csv(const NormCurve& curve, const std::filesystem::path& path) {
  if (curve.grid.empty()) throw std::invalid_argument("export_csv: empty curve");
  write_file(path, curve_csv(curve));
}

std::string curve_svg(const NormCurve& curve) {
  if (curve.grid.empty() || curve.estimates.size() != curve.grid.size())
    throw std::invalid_argument("render_svg: empty curve");
  constexpr double left = 70.0, right = 770.0, top = 30.0, bottom = 540.0;
  double ymax = 4.0;
  for (const auto& e : curve.estimates) ymax = std::max(ymax, std::ceil(e.value));
  auto px = [&](double mu) { return left + (right - left) * mu / 4.0; };
  auto py = [&](double n) { return bottom - (bottom - top) * n / ymax; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  s << "<g stroke=\"black\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << format_fixed(left) << "\" y1=\"" << format_fixed(bottom) << "\" x2=\"" << format_fixed(right)
    << "\" y2=\"" << format_fixed(bottom) << "\"/>\n";
  s << "<line x1=\"" << format_fixed(left) << "\" y1=\"" << format_fixed(bottom) << "\" x2=\"" << format_fixed(left)
    << "\" y2=\"" << format_fixed(top) << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    s << "<line class=\"xtick\" x1=\"" << format_fixed(px(k)) << "\" y1=\"" << format_fixed(bottom) << "\" x2=\""
      << format_fixed(px(k)) << "\" y2=\"" << format_fixed(bottom + 6) << "\"/>\n";
  }
  for (int k = 0; k <= static_cast<int>(ymax); ++k) {
    s << "<line class=\"ytick\" x1=\"" << format_fixed(left - 6) << "\" y1=\"" << format_fixed(py(k)) << "\" x2=\""
      << format_fixed(left) << "\" y2=\"" << format_fixed(py(k)) << "\"/>\n";
  }
  s << "</g>\n";
  s << "<g font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">\n";
  for (int k = 0; k <= 4; ++k)
    s << "<text x=\"" << format_fixed(px(k)) << "\" y=\"" << format_fixed(bottom + 22) << "\">" << k << "</text>\n";
  for (int k = 0; k <= static_cast<int>(ymax); ++k)
    s << "<text x=\"" << format_fixed(left - 20) << "\" y=\"" << format_fixed(py(k) + 5) << "\">" << k << "</text>\n";
  s << "<text x=\"" << format_fixed(px(kKestenBound)) << "\" y=\"" << format_fixed(bottom + 40)
    << "\">2√3</text>\n";
  s << "<text x=\"" << format_fixed(0.5 * (left + right)) << "\" y=\"" << format_fixed(590)
    << "\">μ</text>\n";
  s << "</g>\n";
  // Reference lines: μ = 2√3 and N = μ.
  s << "<line class=\"kesten\" x1=\"" << format_fixed(px(kKestenBound)) << "\" y1=\"" << format_fixed(bottom)
    << "\" x2=\"" << format_fixed(px(kKestenBound)) << "\" y2=\"" << format_fixed(top)
    << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  s << "<line class=\"identity\" x1=\"" << format_fixed(px(0)) << "\" y1=\"" << format_fixed(py(0)) << "\" x2=\""
    << format_fixed(px(4)) << "\" y2=\"" << format_fixed(py(4)) << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
  s << "<polyline class=\"estimate\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    if (k > 0) s << ' ';
    s << format_fixed(px(curve.grid[k])) << ',' << format_fixed(py(curve.estimates[k].value));
  }
  s << "\"/>\n";
  s << "<text x=\"400\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
    << to_string(curve.element) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void render_svg(const NormCurve& curve, const std::filesystem::path& path) { write_file(path, curve_svg(curve)); }

}  // namespace crep
