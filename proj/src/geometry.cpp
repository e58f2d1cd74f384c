#include "bneck/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bneck {

namespace {

void check_level(int level) {
  if (level < 1 || level > kMaxSupportedLevel) {
    throw std::invalid_argument("invalid grid level " + std::to_string(level));
  }
}

// Candidate lattice indices along one axis at Chebyshev distance < delta.
void axis_candidates(double coord, int level, std::int64_t out[2], int& count) {
  const double t = std::ldexp(coord, level - 1);
  const double lo = std::floor(t);
  const auto ilo = static_cast<std::int64_t>(lo);
  count = 0;
  out[count++] = ilo;
  if (t != lo) out[count++] = ilo + 1;
}

}  // namespace

void validate_point_set(const PointSet& set) {
  if (set.points.empty()) {
    throw std::invalid_argument("point set '" + set.id + "' is empty");
  }
  for (const Point& p : set.points) {
    // Written so that NaN fails too.
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      throw std::invalid_argument("point set '" + set.id + "' has a point outside [0,1]^2");
    }
  }
}

std::int64_t cells_per_side(int level) {
  if (level == 0) return 0;
  check_level(level);
  return std::int64_t{1} << (level - 1);
}

Point GridPoint::coords() const {
  if (level == 0) return {0.0, 0.0};
  return {std::ldexp(static_cast<double>(ix), 1 - level),
          std::ldexp(static_cast<double>(iy), 1 - level)};
}

double delta(int level) {
  check_level(level);
  return std::ldexp(1.0, 1 - level);
}

double l1_dist(Point p, Point q) noexcept {
  return std::abs(p.x - q.x) + std::abs(p.y - q.y);
}

double linf_dist(Point p, Point q) noexcept {
  return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y));
}

std::int64_t nearest_index(double coord, int level) {
  check_level(level);
  // Scaling by a power of two is exact, so frac is exact as well.
  const double t = std::ldexp(coord, level - 1);
  const double lo = std::floor(t);
  const double frac = t - lo;
  const double tie_tolerance = std::ldexp(1.0, level - 41);
  auto idx = static_cast<std::int64_t>(lo);
  if (frac > 0.5 + tie_tolerance) ++idx;
  return std::clamp<std::int64_t>(idx, 0, cells_per_side(level));
}

GridPoint nearest_grid_point(Point p, int level) {
  return {level, nearest_index(p.x, level), nearest_index(p.y, level)};
}

GridPoint nearest_grid_point_level0(Point) noexcept { return GridPoint::origin(); }

GridPoint parent(const GridPoint& g) {
  if (g.level < 1) throw std::invalid_argument("level-0 grid point has no parent");
  if (g.level == 1) return GridPoint::origin();
  // Odd indices sit exactly on a half-tie of the coarser grid and round down.
  return {g.level - 1, g.ix >> 1, g.iy >> 1};
}

std::vector<GridPoint> snap_candidates(Point p, int level) {
  check_level(level);
  std::int64_t xs[2], ys[2];
  int nx = 0, ny = 0;
  axis_candidates(p.x, level, xs, nx);
  axis_candidates(p.y, level, ys, ny);

  std::vector<GridPoint> out;
  out.reserve(5);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) out.push_back({level, xs[i], ys[j]});
  }
  out.push_back(nearest_grid_point(p, level));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool cell_adjacent(const GridPoint& a, const GridPoint& b) {
  if (a.level != b.level) {
    throw std::invalid_argument("cell_adjacent: grid points at different levels");
  }
  return std::abs(a.ix - b.ix) <= 1 && std::abs(a.iy - b.iy) <= 1;
}

GridDistribution GridDistribution::of(int level, std::span<const GridIndex> points) {
  GridDistribution dist(level);
  for (const GridIndex& g : points) dist.add(g);
  return dist;
}

GridDistribution GridDistribution::nearest(std::span<const Point> points, int level) {
  GridDistribution dist(level);
  for (const Point& p : points) dist.add(nearest_grid_point(p, level).index());
  return dist;
}

void GridDistribution::add(GridIndex g, std::uint32_t count) {
  if (count == 0) return;
  counts_[g] += count;
  total_ += count;
}

std::vector<GridPoint> GridDistribution::expand() const {
  std::vector<GridPoint> out;
  out.reserve(total_);
  for (const auto& [g, count] : counts_) {
    for (std::uint32_t i = 0; i < count; ++i) out.push_back({level_, g.ix, g.iy});
  }
  return out;
}

}  // namespace bneck
