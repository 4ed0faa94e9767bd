#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "crep/norm_optimizer.hpp"

namespace crep {

/// 2√3, the norm of x in the regular representation of F₂.
inline constexpr double kKestenBound = 3.4641016151377545870548926830117;

struct CurveReport {
  std::string label;
  std::vector<double> grid;
  std::vector<double> estimates;
  std::vector<double> oracle_floor;
  bool monotone = false;
  double max_increment = 0.0;  // largest N̂(μ_{k+1}) − N̂(μ_k)
  double min_increment = 0.0;
  /// Only for the averaging element: max |N̂_x(μ) − μ|. Negative otherwise.
  double max_deviation_from_identity = -1.0;
};

CurveReport continuity_report(const NormCurve& curve);

/// Ball of radius R around the identity in the Cayley graph of F₂ with
/// generators u^{±1}, v^{±1} (the 4-regular tree), vertices in BFS order.
class CayleyBall {
 public:
  explicit CayleyBall(int depth);

  int depth() const { return depth_; }
  std::size_t vertex_count() const { return parent_.size(); }
  /// Neighbours of vertex k inside the ball.
  std::span<const std::int32_t> neighbours(std::size_t k) const;
  std::size_t degree(std::size_t k) const { return neighbours(k).size(); }
  /// Distance from the identity.
  int level(std::size_t k) const { return level_[k]; }
  /// The reduced word of vertex k.
  Word word(std::size_t k) const;

  /// y = A·x for the truncated adjacency; fixed summation order.
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  int depth_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int8_t> last_letter_;  // Letter::code() of the last letter, −1 at the root
  std::vector<std::int8_t> level_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int32_t> adjacency_;
};

/// Top eigenvalue of the truncated adjacency of CayleyBall(depth), by power
/// iteration on A² from the all-ones vector (the tree is bipartite).
/// Throws std::invalid_argument unless 1 ≤ depth ≤ 14.
double cayley_ball_norm(int depth);

struct CsvRow {
  double mu = 0.0;
  double estimate = 0.0;
  int dim = 0;
  int restarts = 0;
  bool converged = false;
};

/// "mu,estimate,dim,restarts,converged" with 9 significant digits.
std::string curve_csv(const NormCurve& curve);
std::vector<CsvRow> parse_curve_csv(const std::string& text);
void export_csv(const NormCurve& curve, const std::filesystem::path& path);

/// 800×600 SVG: the curve as one polyline, ticks at integer μ and at 2√3
/// (dashed), and the line N = μ for reference.
std::string curve_svg(const NormCurve& curve);
void render_svg(const NormCurve& curve, const std::filesystem::path& path);

}  // namespace crep
