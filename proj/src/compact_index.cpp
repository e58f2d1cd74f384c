#include "bneck/compact_index.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "bneck/encoding.hpp"

namespace bneck {

namespace {

struct State {
  NodeId node = Trie::kRoot;
  std::vector<GridIndex> placed;   // level-d snaps, in block order
  std::vector<GridIndex> pending;  // level-(d-1) snaps the block extends
};

struct TrieOutcome {
  int hit_level = 0;
  std::vector<SetHandle> hits;
  std::vector<LevelStats> levels;
};

// Matching size a node with `placed` of `k_total` points must reach against
// a query of n points to stay viable.
std::int64_t required_flow(QueryMode mode, std::size_t placed, std::size_t k_total,
                           std::size_t n) {
  if (mode != QueryMode::Superset) return static_cast<std::int64_t>(placed);
  const std::size_t unplaced = k_total - placed;
  return n > unplaced ? static_cast<std::int64_t>(n - unplaced) : 0;
}

class Explorer {
 public:
  Explorer(const Trie& trie, const std::vector<GridDistribution>& query_levels, QueryMode mode,
           bool per_node, const MatchingOptions& opts)
      : trie_(trie), query_levels_(query_levels), mode_(mode), per_node_(per_node), opts_(opts) {}

  TrieOutcome run() {
    TrieOutcome out;
    const std::size_t k = trie_.cardinality();
    std::vector<State> frontier(1);
    frontier[0].pending.assign(k, GridIndex{0, 0});

    for (int d = 1; d <= static_cast<int>(query_levels_.size()); ++d) {
      const auto t0 = std::chrono::steady_clock::now();
      LevelStats stats{d, 0, 0, 0, 0.0};
      for (std::size_t j = 0; j < k && !frontier.empty(); ++j) {
        frontier = expand(frontier, d, j, stats);
      }
      std::set<SetHandle> hits;
      for (const State& s : frontier) {
        const auto& fin = trie_.node(s.node).finishers;
        hits.insert(fin.begin(), fin.end());
      }
      stats.hits = hits.size();
      stats.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0).count();
      out.levels.push_back(stats);
      if (hits.empty()) break;

      out.hit_level = d;
      out.hits.assign(hits.begin(), hits.end());
      for (State& s : frontier) {
        s.pending = std::move(s.placed);
        s.placed.clear();
      }
    }
    return out;
  }

 private:
  std::vector<State> expand(const std::vector<State>& frontier, int d, std::size_t j,
                            LevelStats& stats) {
    const std::size_t k = trie_.cardinality();
    const bool last = j + 1 == k;
    const GridDistribution& target = query_levels_[static_cast<std::size_t>(d - 1)];
    const std::int64_t need = required_flow(mode_, j + 1, k, target.total());

    std::vector<State> next;
    for (const State& s : frontier) {
      for (const auto& [sym, child] : trie_.children_with_states(s.node)) {
        ++stats.states;
        const Step st = step_of(sym);
        const GridIndex g{2 * s.pending[j].ix + st.dx, 2 * s.pending[j].iy + st.dy};
        State c{child, s.placed, s.pending};
        c.placed.push_back(g);
        if ((per_node_ || last) && need > 0) {
          ++stats.matching_calls;
          const GridDistribution placed = GridDistribution::of(d, c.placed);
          if (matching_size(placed, target, need, opts_) < need) continue;
        }
        next.push_back(std::move(c));
      }
    }
    return next;
  }

  const Trie& trie_;
  const std::vector<GridDistribution>& query_levels_;
  QueryMode mode_;
  bool per_node_;
  const MatchingOptions& opts_;
};

bool choose_per_node(Strategy strategy, std::size_t k, std::size_t stored) {
  switch (strategy) {
    case Strategy::PerNode: return true;
    case Strategy::LeafOnly: return false;
    case Strategy::Auto: break;
  }
  // Per-node work is bounded by roughly 10^k matchings per level, leaf-only
  // by one matching per stored set.
  if (k >= 19) return false;
  std::uint64_t pow10 = 1;
  for (std::size_t i = 0; i < k; ++i) pow10 *= 10;
  return pow10 < stored;
}

}  // namespace

CompactIndex::CompactIndex(CompactConfig config) : config_(config) {
  if (config_.max_level < 1 || config_.max_level > kMaxSupportedLevel) {
    throw std::invalid_argument("max_level out of range");
  }
}

CompactIndex CompactIndex::from_parts(CompactConfig config, Registry registry, TrieMap tries) {
  CompactIndex idx(config);
  for (const PointSet& s : registry.sets()) ++idx.size_counts_[s.size()];
  idx.registry_ = std::move(registry);
  idx.tries_ = std::move(tries);
  return idx;
}

std::size_t CompactIndex::sets_with_size(std::size_t k) const {
  auto it = size_counts_.find(k);
  return it == size_counts_.end() ? 0 : it->second;
}

std::vector<Direction> CompactIndex::path_string(const PointSet& set, int max_level) {
  LazyQueryState lazy(set.points);
  std::vector<Direction> out;
  out.reserve(set.size() * static_cast<std::size_t>(max_level));
  for (int d = 1; d <= max_level; ++d) {
    const auto block = lazy.next_block();
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

void CompactIndex::insert(PointSet set) {
  validate_point_set(set);
  const std::size_t k = set.size();
  const auto path = path_string(set, config_.max_level);
  const SetHandle owner = registry_.add(std::move(set));
  tries_.try_emplace(k, k).first->second.insert(path, owner);
  ++size_counts_[k];
}

QueryResult CompactIndex::query(const PointSet& q, QueryMode mode, Strategy strategy) const {
  validate_point_set(q);
  const std::size_t n = q.size();

  std::vector<GridDistribution> query_levels;
  LazyQueryState lazy(q.points);
  for (int d = 1; d <= config_.max_level; ++d) {
    lazy.next_block();
    query_levels.push_back(lazy.distribution());
  }

  std::vector<std::pair<const Trie*, TrieOutcome>> outcomes;
  for (const auto& [k, trie] : tries_) {
    const bool eligible = mode == QueryMode::Nearest  ? k == n
                          : mode == QueryMode::Subset ? k <= n
                                                      : k >= n;
    if (!eligible) continue;
    const bool per_node = choose_per_node(strategy, k, sets_with_size(k));
    Explorer explorer(trie, query_levels, mode, per_node, config_.matching);
    outcomes.emplace_back(&trie, explorer.run());
  }

  QueryResult result;
  for (const auto& [trie, o] : outcomes) {
    result.hit_level = std::max(result.hit_level, o.hit_level);
    for (const LevelStats& ls : o.levels) {
      if (result.levels.size() < static_cast<std::size_t>(ls.level)) {
        result.levels.resize(static_cast<std::size_t>(ls.level));
      }
      LevelStats& acc = result.levels[static_cast<std::size_t>(ls.level - 1)];
      acc.level = ls.level;
      acc.states += ls.states;
      acc.matching_calls += ls.matching_calls;
      acc.hits += ls.hits;
      acc.elapsed_ms += ls.elapsed_ms;
    }
  }
  if (result.hit_level == 0) return result;

  for (const auto& [trie, o] : outcomes) {
    if (o.hit_level != result.hit_level) continue;
    for (SetHandle h : o.hits) result.ids.push_back(registry_.at(h).id);
  }
  std::sort(result.ids.begin(), result.ids.end());
  result.certified_bound = kSafeBoundFactor * delta(result.hit_level);
  result.claimed_bound = kClaimedBoundFactor * delta(result.hit_level);
  return result;
}

}  // namespace bneck
