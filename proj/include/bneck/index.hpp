#pragma once

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bneck/geometry.hpp"
#include "bneck/trie.hpp"

namespace bneck {

enum class QueryMode { Nearest, Subset, Superset };

/// How the compact index decides which trie nodes to run a matching on.
enum class Strategy {
  PerNode,   // every node, pruning failed subtrees immediately
  LeafOnly,  // only nodes that complete a level distribution
  Auto,      // whichever of the two is cheaper for this trie
};

std::string_view to_string(QueryMode m) noexcept;
std::string_view to_string(Strategy s) noexcept;
QueryMode parse_query_mode(std::string_view s);
Strategy parse_strategy(std::string_view s);

struct LevelStats {
  int level = 0;
  std::size_t states = 0;          // trie nodes visited
  std::size_t matching_calls = 0;  // feasibility tests run
  std::size_t hits = 0;            // point sets hit at this level
  double elapsed_ms = 0.0;
};

struct QueryResult {
  std::vector<std::string> ids;  // sorted
  int hit_level = 0;             // d*, 0 when nothing matched
  /// Upper bound on the distance to every returned set, from constants that
  /// hold under the norms used here. Infinite when ids is empty.
  double certified_bound = std::numeric_limits<double>::infinity();
  /// The same bound with the tighter published constant.
  double claimed_bound = std::numeric_limits<double>::infinity();
  std::vector<LevelStats> levels;
};

/// Owns the stored point sets; tries refer to them by handle.
class Registry {
 public:
  /// Throws std::invalid_argument on duplicate ids or invalid points.
  SetHandle add(PointSet set);

  const PointSet& at(SetHandle h) const { return sets_.at(h); }
  const PointSet* find(std::string_view id) const;
  std::size_t size() const noexcept { return sets_.size(); }
  const std::vector<PointSet>& sets() const noexcept { return sets_; }

 private:
  std::vector<PointSet> sets_;
  std::unordered_map<std::string, SetHandle> by_id_;
};

using TrieMap = std::map<std::size_t, Trie>;

std::size_t total_nodes(const TrieMap& tries);

}  // namespace bneck
