#pragma once

#include <cstdint>
#include <stdexcept>

#include "bneck/index.hpp"

namespace bneck {

/// Raised when a point set would need more snap-roundings than the index allows.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MultiSnapConfig {
  int max_level = kDefaultMaxLevel;
  /// Upper limit on 4^|P| * max_level for a single inserted set.
  std::uint64_t budget = 1'000'000;
};

/// Stores every distinguishable snap-rounding of each point set, level by
/// level. A query is a sequence of exact trie lookups of the query's own
/// nearest-snap distribution; no matching is needed at query time.
///
/// Hit at level d  =>  distance <= 3 * delta(d)
/// delta(d) > 2 * distance  =>  hit at level d
class MultiSnapIndex {
 public:
  static constexpr double kSafeBoundFactor = 3.0;
  static constexpr double kClaimedBoundFactor = 1.5;

  explicit MultiSnapIndex(MultiSnapConfig config = {});

  /// Throws BudgetExceeded or std::invalid_argument.
  void insert(PointSet set);

  QueryResult query_nearest(const PointSet& q) const;

  const MultiSnapConfig& config() const noexcept { return config_; }
  const Registry& registry() const noexcept { return registry_; }
  const TrieMap& tries() const noexcept { return tries_; }
  std::size_t node_count() const { return total_nodes(tries_); }

  /// Distinct level-d snap-rounding distributions of a set, each sorted.
  static std::vector<std::vector<GridIndex>> snap_roundings(const PointSet& set, int level);

  static MultiSnapIndex from_parts(MultiSnapConfig config, Registry registry, TrieMap tries);

 private:
  MultiSnapConfig config_;
  Registry registry_;
  TrieMap tries_;
};

}  // namespace bneck
