#include "bneck/random.hpp"

#include <algorithm>
#include <cmath>

namespace bneck {

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) return 0;
  // Lemire's multiply-shift; the bias is negligible for the ranges used here.
  const auto wide = static_cast<unsigned __int128>(next()) * n;
  return static_cast<std::size_t>(wide >> 64);
}

PointSet Rng::point_set(std::string id, std::size_t n) {
  PointSet s{std::move(id), {}};
  s.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.points.push_back(point());
  return s;
}

PointSet Rng::perturb(const PointSet& set, double eps, std::string id) {
  PointSet out{std::move(id), set.points};
  for (Point& p : out.points) {
    p.x = std::clamp(p.x + eps * (2.0 * uniform() - 1.0), 0.0, 1.0);
    p.y = std::clamp(p.y + eps * (2.0 * uniform() - 1.0), 0.0, 1.0);
  }
  return out;
}

}  // namespace bneck
