#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace bneck {

/// Deepest grid level any index may be configured with. Level 30 has
/// 2^29 cells per side, which keeps every index comfortably inside int64.
inline constexpr int kMaxSupportedLevel = 30;
inline constexpr int kDefaultMaxLevel = 20;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// A named multiset of points in the unit box.
struct PointSet {
  std::string id;
  std::vector<Point> points;

  std::size_t size() const noexcept { return points.size(); }
};

/// Throws std::invalid_argument unless every coordinate lies in [0,1] and
/// the set is non-empty.
void validate_point_set(const PointSet& set);

/// Lattice indices of a grid vertex. Ordering is (ix, iy).
struct GridIndex {
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  friend auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

/// A level-d grid vertex at (ix * delta(d), iy * delta(d)). Level 0 is the
/// degenerate grid containing only the origin.
struct GridPoint {
  int level = 0;
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  GridIndex index() const noexcept { return {ix, iy}; }
  Point coords() const;

  static GridPoint origin() noexcept { return {0, 0, 0}; }

  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// Number of grid steps per unit at level d (2^(d-1)); 0 for level 0.
std::int64_t cells_per_side(int level);

/// Grid spacing 2^(1-d).
double delta(int level);

double l1_dist(Point p, Point q) noexcept;
double linf_dist(Point p, Point q) noexcept;

/// Per-coordinate round-to-nearest with exact half-ties going South/West.
/// Inputs within 2^-40 of a half-tie count as ties.
GridPoint nearest_grid_point(Point p, int level);
std::int64_t nearest_index(double coord, int level);

GridPoint nearest_grid_point_level0(Point p) noexcept;

/// Snaps a level-d grid point to level d-1. Equivalent to
/// nearest_grid_point(g.coords(), d-1), computed on indices.
GridPoint parent(const GridPoint& g);

/// Corners of the level-d cell(s) at Chebyshev distance < delta(d) from p,
/// plus the nearest grid point. Between 1 and 4 entries, sorted.
std::vector<GridPoint> snap_candidates(Point p, int level);

/// True iff the two points are corners of a common level-d cell.
bool cell_adjacent(const GridPoint& a, const GridPoint& b);

/// Multiset of grid points at a single level.
class GridDistribution {
 public:
  explicit GridDistribution(int level = 1) : level_(level) {}

  static GridDistribution of(int level, std::span<const GridIndex> points);
  static GridDistribution nearest(std::span<const Point> points, int level);

  void add(GridIndex g, std::uint32_t count = 1);

  int level() const noexcept { return level_; }
  std::size_t total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return total_ == 0; }
  const std::map<GridIndex, std::uint32_t>& counts() const noexcept { return counts_; }

  /// Members repeated by multiplicity, in index order.
  std::vector<GridPoint> expand() const;

  friend bool operator==(const GridDistribution&, const GridDistribution&) = default;

 private:
  int level_;
  std::size_t total_ = 0;
  std::map<GridIndex, std::uint32_t> counts_;
};

}  // namespace bneck
