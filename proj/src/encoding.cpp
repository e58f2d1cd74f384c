#include "bneck/encoding.hpp"

#include <stdexcept>

namespace bneck {

namespace {

constexpr std::array<std::string_view, kAlphabetSize> kNames = {"I",  "N",  "S",  "E", "W",
                                                                  "NE", "SE", "NW", "SW"};
constexpr std::array<Step, kAlphabetSize> kSteps = {
    Step{0, 0}, Step{0, 1}, Step{0, -1}, Step{1, 0}, Step{-1, 0},
    Step{1, 1}, Step{1, -1}, Step{-1, 1}, Step{-1, -1}};

Direction direction_of(std::int64_t dx, std::int64_t dy) {
  for (std::size_t s = 0; s < kAlphabetSize; ++s) {
    if (kSteps[s].dx == dx && kSteps[s].dy == dy) return static_cast<Direction>(s);
  }
  throw std::invalid_argument("grid points are not neighbours across one level");
}

std::size_t sym(Direction d) noexcept { return static_cast<std::size_t>(d); }

}  // namespace

std::string_view to_string(Direction d) noexcept { return kNames[sym(d)]; }

Direction direction_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kAlphabetSize; ++i) {
    if (kNames[i] == s) return static_cast<Direction>(i);
  }
  throw std::invalid_argument("unknown direction symbol '" + std::string(s) + "'");
}

std::string format_symbols(std::span<const Direction> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ',';
    out += to_string(symbols[i]);
  }
  return out;
}

Step step_of(Direction d) noexcept { return kSteps[sym(d)]; }

Direction direction_step(const GridPoint& from, const GridPoint& to) {
  if (to.level != from.level + 1) {
    throw std::invalid_argument("direction_step: levels must differ by one");
  }
  return direction_of(to.ix - 2 * from.ix, to.iy - 2 * from.iy);
}

PointString encode_point(const GridPoint& g) {
  PointString out(static_cast<std::size_t>(g.level));
  GridPoint cur = g;
  for (int i = g.level; i >= 1; --i) {
    const GridPoint up = parent(cur);
    out[static_cast<std::size_t>(i - 1)] = direction_step(up, cur);
    cur = up;
  }
  return out;
}

GridPoint decode_point(std::span<const Direction> s) {
  GridPoint cur = GridPoint::origin();
  for (Direction d : s) {
    const Step st = step_of(d);
    const int level = cur.level + 1;
    const std::int64_t side = cells_per_side(level);
    cur = {level, 2 * cur.ix + st.dx, 2 * cur.iy + st.dy};
    if (cur.ix < 0 || cur.iy < 0 || cur.ix > side || cur.iy > side) {
      throw std::invalid_argument("direction string leaves the unit box at level " +
                                  std::to_string(level));
    }
  }
  return cur;
}

PointString walk_string(Point p, int level) {
  PointString out;
  out.reserve(static_cast<std::size_t>(level));
  GridPoint prev = GridPoint::origin();
  for (int i = 1; i <= level; ++i) {
    const GridPoint next = nearest_grid_point(p, i);
    out.push_back(direction_step(prev, next));
    prev = next;
  }
  return out;
}

DistributionString interleave(std::vector<PointString> strings) {
  DistributionString out;
  out.count = strings.size();
  if (strings.empty()) return out;
  const std::size_t len = strings.front().size();
  for (const auto& s : strings) {
    if (s.size() != len) throw std::invalid_argument("interleave: strings differ in length");
  }
  out.level = static_cast<int>(len);

  // LSD radix sort: stable counting sort on each column, last column first.
  std::vector<std::uint32_t> order(strings.size()), scratch(strings.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t col = len; col-- > 0;) {
    std::array<std::size_t, kAlphabetSize + 1> start{};
    for (auto i : order) ++start[sym(strings[i][col]) + 1];
    for (std::size_t s = 1; s <= kAlphabetSize; ++s) start[s] += start[s - 1];
    for (auto i : order) scratch[start[sym(strings[i][col])]++] = i;
    order.swap(scratch);
  }

  out.symbols.reserve(len * strings.size());
  for (std::size_t col = 0; col < len; ++col) {
    for (auto i : order) out.symbols.push_back(strings[i][col]);
  }
  return out;
}

DistributionString encode_distribution(const GridDistribution& g) {
  std::vector<PointString> strings;
  strings.reserve(g.total());
  for (const GridPoint& p : g.expand()) strings.push_back(encode_point(p));
  DistributionString out = interleave(std::move(strings));
  out.level = g.level();
  return out;
}

std::vector<GridDistribution> decode_levels(const DistributionString& s) {
  const std::size_t n = s.count;
  if (n == 0 || s.symbols.size() != n * static_cast<std::size_t>(s.level)) {
    throw std::invalid_argument("decode_levels: malformed distribution string");
  }
  std::vector<GridDistribution> levels;
  std::vector<GridPoint> cur(n, GridPoint::origin());
  for (int d = 1; d <= s.level; ++d) {
    GridDistribution dist(d);
    for (std::size_t k = 0; k < n; ++k) {
      const Step st = step_of(s.symbols[static_cast<std::size_t>(d - 1) * n + k]);
      cur[k] = {d, 2 * cur[k].ix + st.dx, 2 * cur[k].iy + st.dy};
      const std::int64_t side = cells_per_side(d);
      if (cur[k].ix < 0 || cur[k].iy < 0 || cur[k].ix > side || cur[k].iy > side) {
        throw std::invalid_argument("decode_levels: walk leaves the unit box");
      }
      dist.add(cur[k].index());
    }
    levels.push_back(std::move(dist));
  }
  return levels;
}

LazyQueryState::LazyQueryState(std::vector<Point> points)
    : points_(std::move(points)),
      positions_(points_.size()),
      last_(points_.size(), Direction::I),
      order_(points_.size()),
      group_(points_.size(), 0) {
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
}

std::vector<Direction> LazyQueryState::next_block() {
  if (level_ >= kMaxSupportedLevel) throw std::out_of_range("query exceeded deepest grid level");
  ++level_;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const GridPoint prev{level_ - 1, positions_[i].ix, positions_[i].iy};
    const GridPoint next = nearest_grid_point(points_[i], level_);
    last_[i] = direction_step(level_ == 1 ? GridPoint::origin() : prev, next);
    positions_[i] = next.index();
  }

  // Refine: stable counting sort by new symbol inside each run of equal prefixes.
  std::vector<std::uint32_t> refined;
  std::vector<std::uint32_t> groups;
  refined.reserve(order_.size());
  groups.reserve(order_.size());
  std::uint32_t next_group = 0;
  for (std::size_t begin = 0; begin < order_.size();) {
    std::size_t end = begin;
    while (end < order_.size() && group_[end] == group_[begin]) ++end;
    std::array<std::vector<std::uint32_t>, kAlphabetSize> buckets;
    for (std::size_t k = begin; k < end; ++k) buckets[sym(last_[order_[k]])].push_back(order_[k]);
    for (const auto& bucket : buckets) {
      if (bucket.empty()) continue;
      for (auto i : bucket) {
        refined.push_back(i);
        groups.push_back(next_group);
      }
      ++next_group;
    }
    begin = end;
  }
  order_.swap(refined);
  group_.swap(groups);

  std::vector<Direction> block;
  block.reserve(order_.size());
  for (auto i : order_) block.push_back(last_[i]);
  return block;
}

std::vector<GridIndex> LazyQueryState::sorted_positions() const {
  std::vector<GridIndex> out;
  out.reserve(order_.size());
  for (auto i : order_) out.push_back(positions_[i]);
  return out;
}

GridDistribution LazyQueryState::distribution() const {
  return GridDistribution::of(level_, positions_);
}

}  // namespace bneck
