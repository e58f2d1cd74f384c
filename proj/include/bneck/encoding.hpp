#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bneck/geometry.hpp"

namespace bneck {

/// Compass step between consecutive grid levels. The enumerator order is the
/// lexicographic order used for sorting and is frozen by the index file format.
enum class Direction : std::uint8_t { I = 0, N, S, E, W, NE, SE, NW, SW };

inline constexpr std::size_t kAlphabetSize = 9;

std::string_view to_string(Direction d) noexcept;
Direction direction_from_string(std::string_view s);
/// Comma-joined mnemonics, e.g. "I,NE".
std::string format_symbols(std::span<const Direction> symbols);

struct Step {
  int dx = 0;
  int dy = 0;
};
Step step_of(Direction d) noexcept;

using PointString = std::vector<Direction>;

struct DistributionString {
  std::size_t count = 0;  // n, the block size
  int level = 0;          // d, the number of blocks
  std::vector<Direction> symbols;

  friend bool operator==(const DistributionString&, const DistributionString&) = default;
};

/// Symbol for moving from a level-(d-1) vertex to a level-d vertex. Throws
/// std::invalid_argument if the two are not one fine step apart.
Direction direction_step(const GridPoint& from, const GridPoint& to);

/// Canonical string of a level-d grid point: the walk through its chain of
/// coarser snaps g -> parent(g) -> ... -> origin. Prefixes of the string are
/// the canonical strings of those ancestors.
PointString encode_point(const GridPoint& g);

/// Endpoint of a walk from the origin. Throws std::invalid_argument if the
/// walk leaves the unit box. Accepts any valid walk, not only canonical ones.
GridPoint decode_point(std::span<const Direction> s);

/// Trajectory of an arbitrary point: symbol i is the step from
/// nearest_grid_point(p, i-1) to nearest_grid_point(p, i).
PointString walk_string(Point p, int level);

/// Sorts equal-length strings lexicographically (LSD radix sort) and emits
/// them column by column.
DistributionString interleave(std::vector<PointString> strings);

/// Interleaved canonical strings of every member of g.
DistributionString encode_distribution(const GridDistribution& g);

/// Column-wise decode: the level-j multiset for j = 1..s.level.
std::vector<GridDistribution> decode_levels(const DistributionString& s);

/// Builds the interleaved walk string of a point set one block at a time.
/// Each new column is sorted within groups of equal prefixes, so the blocks
/// concatenate to interleave({walk_string(q, d) : q}) at every depth.
class LazyQueryState {
 public:
  explicit LazyQueryState(std::vector<Point> points);

  int level() const noexcept { return level_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// Advances one level and returns the new block of size() symbols.
  std::vector<Direction> next_block();

  /// Current-level snaps in block order (the order block symbols refer to).
  std::vector<GridIndex> sorted_positions() const;
  GridDistribution distribution() const;

 private:
  std::vector<Point> points_;
  int level_ = 0;
  std::vector<GridIndex> positions_;
  std::vector<Direction> last_;
  std::vector<std::uint32_t> order_;   // point indices, sorted by prefix
  std::vector<std::uint32_t> group_;   // prefix class of order_[k]
};

}  // namespace bneck
