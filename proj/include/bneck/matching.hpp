#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bneck/geometry.hpp"

namespace bneck {

struct MatchingOptions {
  /// Grid steps (Chebyshev) two matched points may be apart. 1 is the
  /// shared-cell relation; 0 admits only identical points and exists to
  /// check that the validation harness catches a broken adjacency.
  int adjacency_steps = 1;
};

/// Capacitated network for matching two same-level grid distributions:
///   S -> o_p -(mult)-> g_p -> c -> g_q -(mult)-> i_q -> T
/// with one centre node c per grid cell that has a corner in either input.
class FlowNetwork {
 public:
  enum class Role : std::uint8_t { SuperSource, SuperSink, Source, FGrid, Center, QGrid, Sink };

  struct Node {
    Role role;
    Point position;  // embedding metadata only
    GridIndex grid;  // owning grid point or cell corner
  };
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    std::int64_t capacity;
  };

  static constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;
  static constexpr std::uint32_t kSource = 0;
  static constexpr std::uint32_t kSink = 1;

  int level() const noexcept { return level_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::size_t count(Role role) const;

  /// Graphviz rendering for inspection.
  std::string to_dot() const;

 private:
  friend FlowNetwork build_flow_network(const GridDistribution&, const GridDistribution&,
                                        const MatchingOptions&);
  int level_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

FlowNetwork build_flow_network(const GridDistribution& f, const GridDistribution& gq,
                               const MatchingOptions& opts = {});

/// Maximum flow from kSource to kSink; stops early once `limit` is reached.
std::int64_t max_flow(const FlowNetwork& net,
                      std::int64_t limit = FlowNetwork::kUnbounded,
                      std::vector<std::int64_t>* edge_flow = nullptr);

struct MatchedPair {
  GridIndex from;
  GridIndex to;
  std::uint32_t count;
};

struct MatchResult {
  std::int64_t flow_value = 0;
  std::vector<MatchedPair> assignment;
};

/// Maximum capacitated matching between f and gq under the adjacency of opts.
MatchResult max_matching(const GridDistribution& f, const GridDistribution& gq,
                         const MatchingOptions& opts = {});

/// Flow value only, stopping once `target` units are routed.
std::int64_t matching_size(const GridDistribution& f, const GridDistribution& gq,
                           std::int64_t target, const MatchingOptions& opts = {});

/// Maximum-cardinality bipartite matching (Hopcroft-Karp).
class HopcroftKarp {
 public:
  HopcroftKarp(std::size_t left, std::size_t right);
  void add_edge(std::uint32_t u, std::uint32_t v);
  std::size_t solve();
  /// Right partner of u after solve(), or kFree.
  std::uint32_t partner(std::uint32_t u) const { return match_left_.at(u); }

  static constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();

 private:
  bool bfs();
  bool dfs(std::uint32_t u);

  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::uint32_t> match_left_, match_right_, dist_;
};

/// min over bijections of the longest L1 edge. Exact: binary search over the
/// sorted candidate distances with a perfect-matching test.
double exact_bottleneck(const PointSet& p, const PointSet& q);

/// min over injections of `small` into `large` of the longest L1 edge. The
/// subset/superset analogue of exact_bottleneck.
double exact_partial_bottleneck(const PointSet& small, const PointSet& large);

/// Enumerates all |P|! bijections; refuses sets larger than 8.
double brute_force_bottleneck(const PointSet& p, const PointSet& q);

}  // namespace bneck
