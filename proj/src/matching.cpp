#include "bneck/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bneck {

namespace {

// Keys of the centre nodes a grid point is attached to.
void center_keys(GridIndex g, int level, int steps, std::vector<GridIndex>& out) {
  out.clear();
  if (steps == 0) {
    out.push_back(g);
    return;
  }
  const std::int64_t side = cells_per_side(level);
  for (std::int64_t cx = g.ix - 1; cx <= g.ix; ++cx) {
    for (std::int64_t cy = g.iy - 1; cy <= g.iy; ++cy) {
      if (cx >= 0 && cy >= 0 && cx < side && cy < side) out.push_back({cx, cy});
    }
  }
}

Point grid_coords(GridIndex g, int level) { return GridPoint{level, g.ix, g.iy}.coords(); }

class Dinic {
 public:
  explicit Dinic(std::size_t n) : adj_(n), level_(n), iter_(n) {}

  std::size_t add_edge(std::uint32_t u, std::uint32_t v, std::int64_t cap) {
    const std::size_t id = to_.size();
    to_.push_back(v);
    cap_.push_back(cap);
    adj_[u].push_back(static_cast<std::uint32_t>(id));
    to_.push_back(u);
    cap_.push_back(0);
    adj_[v].push_back(static_cast<std::uint32_t>(id + 1));
    return id;
  }

  std::int64_t run(std::uint32_t s, std::uint32_t t, std::int64_t limit) {
    std::int64_t flow = 0;
    while (flow < limit && bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (flow < limit) {
        const std::int64_t pushed = dfs(s, t, limit - flow);
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  std::int64_t flow_on(std::size_t edge) const { return cap_[edge + 1]; }

 private:
  bool bfs(std::uint32_t s, std::uint32_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::uint32_t> queue{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = queue[head];
      for (auto e : adj_[u]) {
        if (cap_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          queue.push_back(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::uint32_t u, std::uint32_t t, std::int64_t budget) {
    if (u == t) return budget;
    for (auto& i = iter_[u]; i < adj_[u].size(); ++i) {
      const auto e = adj_[u][i];
      const auto v = to_[e];
      if (cap_[e] <= 0 || level_[v] != level_[u] + 1) continue;
      const std::int64_t got = dfs(v, t, std::min(budget, cap_[e]));
      if (got > 0) {
        cap_[e] -= got;
        cap_[e ^ 1] += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::uint32_t> to_;
  std::vector<std::int64_t> cap_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

void check_same_level(const GridDistribution& f, const GridDistribution& gq) {
  if (f.level() != gq.level()) {
    throw std::invalid_argument("matching: distributions are at different levels");
  }
}

}  // namespace

std::size_t FlowNetwork::count(Role role) const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [&](const Node& n) { return n.role == role; }));
}

std::string FlowNetwork::to_dot() const {
  static constexpr const char* kRoleName[] = {"S", "T", "o", "gF", "c", "gQ", "i"};
  std::ostringstream os;
  os << "digraph flow_level_" << level_ << " {\n";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    os << "  n" << i << " [label=\"" << kRoleName[static_cast<int>(n.role)] << "(" << n.grid.ix
       << "," << n.grid.iy << ")\" pos=\"" << n.position.x << "," << n.position.y << "\"];\n";
  }
  for (const Edge& e : edges_) {
    os << "  n" << e.from << " -> n" << e.to;
    if (e.capacity < kUnbounded) os << " [label=\"" << e.capacity << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

FlowNetwork build_flow_network(const GridDistribution& f, const GridDistribution& gq,
                               const MatchingOptions& opts) {
  check_same_level(f, gq);
  if (opts.adjacency_steps != 0 && opts.adjacency_steps != 1) {
    throw std::invalid_argument("adjacency_steps must be 0 or 1");
  }
  const int level = f.level();
  const double third = delta(level) / 3.0;
  const double half = delta(level) / 2.0;

  FlowNetwork net;
  net.level_ = level;
  net.nodes_.push_back({FlowNetwork::Role::SuperSource, {}, {}});
  net.nodes_.push_back({FlowNetwork::Role::SuperSink, {}, {}});

  auto add_node = [&](FlowNetwork::Role role, Point pos, GridIndex g) {
    net.nodes_.push_back({role, pos, g});
    return static_cast<std::uint32_t>(net.nodes_.size() - 1);
  };
  auto add_edge = [&](std::uint32_t u, std::uint32_t v, std::int64_t cap) {
    net.edges_.push_back({u, v, cap});
  };

  std::map<GridIndex, std::uint32_t> centers;
  std::vector<GridIndex> keys;
  auto center_of = [&](GridIndex key) {
    auto [it, fresh] = centers.try_emplace(key, 0);
    if (fresh) {
      const Point pos = opts.adjacency_steps == 0
                            ? grid_coords(key, level)
                            : Point{grid_coords(key, level).x + half, grid_coords(key, level).y + half};
      it->second = add_node(FlowNetwork::Role::Center, pos, key);
    }
    return it->second;
  };

  for (const auto& [g, count] : f.counts()) {
    const Point at = grid_coords(g, level);
    const auto src = add_node(FlowNetwork::Role::Source, {at.x, at.y + third}, g);
    const auto grid = add_node(FlowNetwork::Role::FGrid, at, g);
    add_edge(FlowNetwork::kSource, src, FlowNetwork::kUnbounded);
    add_edge(src, grid, count);
    center_keys(g, level, opts.adjacency_steps, keys);
    for (GridIndex k : keys) add_edge(grid, center_of(k), FlowNetwork::kUnbounded);
  }
  for (const auto& [g, count] : gq.counts()) {
    const Point at = grid_coords(g, level);
    const auto grid = add_node(FlowNetwork::Role::QGrid, at, g);
    const auto sink = add_node(FlowNetwork::Role::Sink, {at.x, at.y - third}, g);
    center_keys(g, level, opts.adjacency_steps, keys);
    for (GridIndex k : keys) add_edge(center_of(k), grid, FlowNetwork::kUnbounded);
    add_edge(grid, sink, count);
    add_edge(sink, FlowNetwork::kSink, FlowNetwork::kUnbounded);
  }
  return net;
}

std::int64_t max_flow(const FlowNetwork& net, std::int64_t limit,
                      std::vector<std::int64_t>* edge_flow) {
  Dinic solver(net.nodes().size());
  std::vector<std::size_t> ids;
  ids.reserve(net.edges().size());
  for (const auto& e : net.edges()) ids.push_back(solver.add_edge(e.from, e.to, e.capacity));
  const std::int64_t flow = solver.run(FlowNetwork::kSource, FlowNetwork::kSink, limit);
  if (edge_flow) {
    edge_flow->clear();
    for (auto id : ids) edge_flow->push_back(solver.flow_on(id));
  }
  return flow;
}

MatchResult max_matching(const GridDistribution& f, const GridDistribution& gq,
                         const MatchingOptions& opts) {
  const FlowNetwork net = build_flow_network(f, gq, opts);
  std::vector<std::int64_t> flows;
  MatchResult result;
  result.flow_value = max_flow(net, FlowNetwork::kUnbounded, &flows);

  // Pair up what enters and leaves each centre node.
  struct Side {
    std::vector<std::pair<GridIndex, std::int64_t>> in, out;
  };
  std::map<std::uint32_t, Side> per_center;
  const auto& nodes = net.nodes();
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const auto& e = net.edges()[i];
    if (flows[i] <= 0) continue;
    if (nodes[e.to].role == FlowNetwork::Role::Center) {
      per_center[e.to].in.emplace_back(nodes[e.from].grid, flows[i]);
    } else if (nodes[e.from].role == FlowNetwork::Role::Center) {
      per_center[e.from].out.emplace_back(nodes[e.to].grid, flows[i]);
    }
  }
  std::map<std::pair<GridIndex, GridIndex>, std::int64_t> pairs;
  for (auto& [c, side] : per_center) {
    std::size_t j = 0;
    for (auto& [from, amount] : side.in) {
      while (amount > 0 && j < side.out.size()) {
        const std::int64_t take = std::min(amount, side.out[j].second);
        pairs[{from, side.out[j].first}] += take;
        amount -= take;
        side.out[j].second -= take;
        if (side.out[j].second == 0) ++j;
      }
    }
  }
  for (const auto& [key, count] : pairs) {
    result.assignment.push_back({key.first, key.second, static_cast<std::uint32_t>(count)});
  }
  return result;
}

std::int64_t matching_size(const GridDistribution& f, const GridDistribution& gq,
                           std::int64_t target, const MatchingOptions& opts) {
  if (target <= 0) {
    check_same_level(f, gq);
    return 0;
  }
  return max_flow(build_flow_network(f, gq, opts), target);
}

HopcroftKarp::HopcroftKarp(std::size_t left, std::size_t right)
    : adj_(left), match_left_(left, kFree), match_right_(right, kFree), dist_(left) {}

void HopcroftKarp::add_edge(std::uint32_t u, std::uint32_t v) {
  if (u >= adj_.size() || v >= match_right_.size()) {
    throw std::out_of_range("HopcroftKarp::add_edge: vertex out of range");
  }
  adj_[u].push_back(v);
}

bool HopcroftKarp::bfs() {
  constexpr auto inf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> queue;
  for (std::uint32_t u = 0; u < adj_.size(); ++u) {
    if (match_left_[u] == kFree) {
      dist_[u] = 0;
      queue.push_back(u);
    } else {
      dist_[u] = inf;
    }
  }
  bool found = false;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto u = queue[head];
    for (auto v : adj_[u]) {
      const auto w = match_right_[v];
      if (w == kFree) {
        found = true;
      } else if (dist_[w] == inf) {
        dist_[w] = dist_[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return found;
}

bool HopcroftKarp::dfs(std::uint32_t u) {
  for (auto v : adj_[u]) {
    const auto w = match_right_[v];
    if (w == kFree || (dist_[w] == dist_[u] + 1 && dfs(w))) {
      match_left_[u] = v;
      match_right_[v] = u;
      return true;
    }
  }
  dist_[u] = std::numeric_limits<std::uint32_t>::max();
  return false;
}

std::size_t HopcroftKarp::solve() {
  std::size_t size = static_cast<std::size_t>(
      std::count_if(match_left_.begin(), match_left_.end(), [](auto v) { return v != kFree; }));
  while (bfs()) {
    for (std::uint32_t u = 0; u < adj_.size(); ++u) {
      if (match_left_[u] == kFree && dfs(u)) ++size;
    }
  }
  return size;
}

double exact_partial_bottleneck(const PointSet& small, const PointSet& large) {
  const std::size_t a = small.size(), b = large.size();
  if (a > b) throw std::invalid_argument("exact_partial_bottleneck: first set is larger");
  if (a == 0) return 0.0;

  std::vector<double> dist(a * b);
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) dist[i * b + j] = l1_dist(small.points[i], large.points[j]);
  }
  std::vector<double> candidates = dist;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto feasible = [&](double threshold) {
    HopcroftKarp hk(a, b);
    for (std::uint32_t i = 0; i < a; ++i) {
      for (std::uint32_t j = 0; j < b; ++j) {
        if (dist[i * b + j] <= threshold) hk.add_edge(i, j);
      }
    }
    return hk.solve() == a;
  };

  // The largest candidate is always feasible.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

double exact_bottleneck(const PointSet& p, const PointSet& q) {
  if (p.size() != q.size()) throw std::invalid_argument("exact_bottleneck: sizes differ");
  return exact_partial_bottleneck(p, q);
}

double brute_force_bottleneck(const PointSet& p, const PointSet& q) {
  if (p.size() != q.size()) throw std::invalid_argument("brute_force_bottleneck: sizes differ");
  if (p.size() > 8) throw std::invalid_argument("brute_force_bottleneck: refusing more than 8 points");
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  if (perm.empty()) return 0.0;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      worst = std::max(worst, l1_dist(p.points[i], q.points[perm[i]]));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace bneck
