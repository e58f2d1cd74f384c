#pragma once

#include <optional>

#include "bneck/compact_index.hpp"

namespace bneck {

struct ApproxResult {
  double estimate = 0.0;  // delta(d*) / sqrt(2)
  int d_star = 0;
  double lower = 0.0;     // delta(d*) / 4, or 0 at the resolution floor
  double upper = 0.0;     // 4 * delta(d*)
  bool at_resolution_floor = false;
  /// First level deeper than d*+1 whose snapped distributions match again,
  /// if any. Matching levels are not known to be contiguous.
  std::optional<int> gap_level;
};

/// Estimates the bottleneck distance of two equal-size sets by snapping
/// both to successively finer grids until their distributions stop matching.
/// Throws std::invalid_argument on a size mismatch.
ApproxResult approx_bottleneck(const PointSet& p, const PointSet& q,
                               int max_level = kDefaultMaxLevel,
                               const MatchingOptions& opts = {});

}  // namespace bneck
