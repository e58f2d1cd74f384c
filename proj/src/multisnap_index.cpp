#include "bneck/multisnap_index.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "bneck/encoding.hpp"

namespace bneck {

namespace {

bool within_budget(std::size_t set_size, int max_level, std::uint64_t budget) {
  if (set_size >= 31) return false;
  const std::uint64_t per_level = std::uint64_t{1} << (2 * set_size);
  return per_level <= budget / static_cast<std::uint64_t>(max_level);
}

}  // namespace

MultiSnapIndex::MultiSnapIndex(MultiSnapConfig config) : config_(config) {
  if (config_.max_level < 1 || config_.max_level > kMaxSupportedLevel) {
    throw std::invalid_argument("max_level out of range");
  }
}

MultiSnapIndex MultiSnapIndex::from_parts(MultiSnapConfig config, Registry registry,
                                          TrieMap tries) {
  MultiSnapIndex idx(config);
  idx.registry_ = std::move(registry);
  idx.tries_ = std::move(tries);
  return idx;
}

std::vector<std::vector<GridIndex>> MultiSnapIndex::snap_roundings(const PointSet& set,
                                                                   int level) {
  std::vector<std::vector<GridPoint>> choices;
  choices.reserve(set.size());
  for (const Point& p : set.points) choices.push_back(snap_candidates(p, level));

  std::set<std::vector<GridIndex>> seen;
  std::vector<std::size_t> digit(choices.size(), 0);
  std::vector<GridIndex> current(choices.size());
  while (true) {
    for (std::size_t i = 0; i < choices.size(); ++i) current[i] = choices[i][digit[i]].index();
    std::vector<GridIndex> sorted = current;
    std::sort(sorted.begin(), sorted.end());
    seen.insert(std::move(sorted));

    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == choices[i].size()) digit[i++] = 0;
    if (i == digit.size()) break;
  }
  return {seen.begin(), seen.end()};
}

void MultiSnapIndex::insert(PointSet set) {
  validate_point_set(set);
  if (!within_budget(set.size(), config_.max_level, config_.budget)) {
    throw BudgetExceeded("point set '" + set.id + "' of size " + std::to_string(set.size()) +
                         " needs 4^n * max_level above the budget of " +
                         std::to_string(config_.budget));
  }
  const std::size_t k = set.size();
  const SetHandle owner = registry_.add(std::move(set));
  const PointSet& stored = registry_.at(owner);
  Trie& trie = tries_.try_emplace(k, k).first->second;

  // Roundings are enumerated as choices among each point's candidate strings.
  // Duplicate multisets re-insert an existing path, which is a no-op.
  std::vector<std::vector<PointString>> strings(k);
  std::vector<std::size_t> digit(k);
  std::vector<const PointString*> chosen(k);
  std::vector<Direction> symbols;
  for (int d = 1; d <= config_.max_level; ++d) {
    for (std::size_t i = 0; i < k; ++i) {
      strings[i].clear();
      for (const GridPoint& c : snap_candidates(stored.points[i], d)) {
        strings[i].push_back(encode_point(c));
      }
    }
    std::fill(digit.begin(), digit.end(), 0);
    while (true) {
      for (std::size_t i = 0; i < k; ++i) chosen[i] = &strings[i][digit[i]];
      std::sort(chosen.begin(), chosen.end(),
                [](const PointString* a, const PointString* b) { return *a < *b; });
      symbols.clear();
      for (std::size_t col = 0; col < static_cast<std::size_t>(d); ++col) {
        for (const PointString* s : chosen) symbols.push_back((*s)[col]);
      }
      trie.insert(symbols, owner);

      std::size_t i = 0;
      while (i < k && ++digit[i] == strings[i].size()) digit[i++] = 0;
      if (i == k) break;
    }
  }
}

QueryResult MultiSnapIndex::query_nearest(const PointSet& q) const {
  validate_point_set(q);
  QueryResult result;
  auto it = tries_.find(q.size());
  if (it == tries_.end()) return result;
  const Trie& trie = it->second;

  std::vector<Direction> previous;
  NodeId prev_node = Trie::kRoot;
  NodeId hit_node = Trie::kRoot;
  for (int d = 1; d <= config_.max_level; ++d) {
    const auto t0 = std::chrono::steady_clock::now();
    const DistributionString s = encode_distribution(GridDistribution::nearest(q.points, d));
    const std::span<const Direction> all(s.symbols);

    // The canonical string of this level usually extends the previous one;
    // when double rounding breaks that, the lookup restarts at the root.
    Trie::WalkResult walk;
    std::size_t expected = all.size();
    if (!previous.empty() && std::equal(previous.begin(), previous.end(), all.begin())) {
      walk = trie.walk_from(prev_node, all.subspan(previous.size()));
      expected -= previous.size();
    } else {
      walk = trie.walk(all);
    }
    LevelStats stats{d, walk.consumed, 0, 0, 0.0};
    const bool hit = walk.consumed == expected && !trie.node(walk.node).finishers.empty();
    if (hit) stats.hits = trie.node(walk.node).finishers.size();
    stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    result.levels.push_back(stats);
    if (!hit) break;

    hit_node = walk.node;
    result.hit_level = d;
    previous = s.symbols;
    prev_node = walk.node;
  }

  if (result.hit_level > 0) {
    for (SetHandle h : trie.node(hit_node).finishers) result.ids.push_back(registry_.at(h).id);
    std::sort(result.ids.begin(), result.ids.end());
    result.certified_bound = kSafeBoundFactor * delta(result.hit_level);
    result.claimed_bound = kClaimedBoundFactor * delta(result.hit_level);
  }
  return result;
}

}  // namespace bneck
