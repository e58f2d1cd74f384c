#pragma once

#include "bneck/index.hpp"
#include "bneck/matching.hpp"

namespace bneck {

struct CompactConfig {
  int max_level = kDefaultMaxLevel;
  MatchingOptions matching{};
};

/// Linear-space index: each point set is stored as the single interleaved
/// string of its nearest-snap walks, one block per level. Queries explore the
/// trie breadth-first, keeping only nodes whose partial distribution can
/// still be matched into the query's distribution at the same level.
///
/// Hit at level d  =>  distance <= 4 * delta(d)
/// delta(d) > 2 * distance  =>  hit at level d
class CompactIndex {
 public:
  static constexpr double kSafeBoundFactor = 4.0;
  static constexpr double kClaimedBoundFactor = 2.0;

  explicit CompactIndex(CompactConfig config = {});

  void insert(PointSet set);

  QueryResult query(const PointSet& q, QueryMode mode, Strategy strategy = Strategy::Auto) const;
  QueryResult query_nearest(const PointSet& q, Strategy strategy = Strategy::Auto) const {
    return query(q, QueryMode::Nearest, strategy);
  }
  QueryResult query_subset(const PointSet& q, Strategy strategy = Strategy::Auto) const {
    return query(q, QueryMode::Subset, strategy);
  }
  QueryResult query_superset(const PointSet& q, Strategy strategy = Strategy::Auto) const {
    return query(q, QueryMode::Superset, strategy);
  }

  const CompactConfig& config() const noexcept { return config_; }
  const Registry& registry() const noexcept { return registry_; }
  const TrieMap& tries() const noexcept { return tries_; }
  std::size_t node_count() const { return total_nodes(tries_); }
  /// Number of stored sets per cardinality.
  std::size_t sets_with_size(std::size_t k) const;

  /// The string a set is stored under: its nearest-snap walks interleaved,
  /// levels 1..max_level.
  static std::vector<Direction> path_string(const PointSet& set, int max_level);

  static CompactIndex from_parts(CompactConfig config, Registry registry, TrieMap tries);

 private:
  CompactConfig config_;
  Registry registry_;
  TrieMap tries_;
  std::map<std::size_t, std::size_t> size_counts_;
};

}  // namespace bneck
