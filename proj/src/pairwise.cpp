#include "bneck/pairwise.hpp"

#include <cmath>
#include <stdexcept>

namespace bneck {

ApproxResult approx_bottleneck(const PointSet& p, const PointSet& q, int max_level,
                               const MatchingOptions& opts) {
  if (p.size() != q.size()) throw std::invalid_argument("approx_bottleneck: sizes differ");

  CompactIndex scratch(CompactConfig{max_level, opts});
  PointSet stored{"P", p.points};
  scratch.insert(std::move(stored));
  const QueryResult r = scratch.query_nearest(PointSet{"Q", q.points}, Strategy::PerNode);

  // Every level-1 snap is a corner of the single level-1 cell.
  if (r.hit_level < 1) throw std::logic_error("approx_bottleneck: no match at level 1");

  ApproxResult out;
  out.d_star = r.hit_level;
  const double dstar = delta(out.d_star);
  out.estimate = dstar / std::sqrt(2.0);
  out.upper = CompactIndex::kSafeBoundFactor * dstar;
  out.at_resolution_floor = out.d_star == max_level;
  out.lower = out.at_resolution_floor ? 0.0 : dstar / 4.0;

  for (int d = out.d_star + 2; d <= max_level; ++d) {
    const auto fp = GridDistribution::nearest(p.points, d);
    const auto fq = GridDistribution::nearest(q.points, d);
    const auto n = static_cast<std::int64_t>(p.size());
    if (matching_size(fp, fq, n, opts) == n) {
      out.gap_level = d;
      break;
    }
  }
  return out;
}

}  // namespace bneck
