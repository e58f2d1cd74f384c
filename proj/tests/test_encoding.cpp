#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "bneck/encoding.hpp"
#include "bneck/random.hpp"
#include "oracles.hpp"

using namespace bneck;
using D = Direction;

namespace {

std::string fmt(const std::vector<Direction>& s) { return format_symbols(s); }

GridPoint random_grid_point(Rng& rng, int level) {
  const auto side = static_cast<std::size_t>(cells_per_side(level)) + 1;
  return {level, static_cast<std::int64_t>(rng.below(side)),
          static_cast<std::int64_t>(rng.below(side))};
}

bool is_prefix(const std::vector<Direction>& a, const std::vector<Direction>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

TEST_CASE("symbol order and names") {
  CHECK(static_cast<int>(D::I) == 0);
  CHECK(static_cast<int>(D::SW) == 8);
  for (std::size_t i = 0; i < kAlphabetSize; ++i) {
    const auto d = static_cast<Direction>(i);
    CHECK(direction_from_string(to_string(d)) == d);
  }
  CHECK_THROWS_AS(direction_from_string("X"), std::invalid_argument);
}

TEST_CASE("direction step examples") {
  CHECK(direction_step(GridPoint::origin(), {1, 1, 1}) == D::NE);
  CHECK(direction_step({2, 1, 1}, {3, 2, 2}) == D::I);
  // (0,0) at level 1 to (0,0.5) at level 2
  CHECK(direction_step({1, 0, 0}, {2, 0, 1}) == D::N);
  CHECK_THROWS_AS(direction_step({1, 0, 0}, {2, 3, 0}), std::invalid_argument);
}

TEST_CASE("encode and decode examples") {
  CHECK(fmt(encode_point({3, 0, 0})) == "I,I,I");
  CHECK(fmt(encode_point({1, 1, 1})) == "NE");
  CHECK(fmt(encode_point({2, 1, 1})) == "I,NE");
  CHECK(decode_point(std::vector{D::I, D::I}) == GridPoint{2, 0, 0});
  CHECK(decode_point(std::vector{D::NE}) == GridPoint{1, 1, 1});
  CHECK(decode_point(std::vector{D::I, D::NE}) == GridPoint{2, 1, 1});
  CHECK_THROWS_AS(decode_point(std::vector{D::SW}), std::invalid_argument);
}

TEST_CASE("round trip on every grid point up to level 5") {
  for (int level = 1; level <= 5; ++level) {
    const std::int64_t side = cells_per_side(level);
    for (std::int64_t x = 0; x <= side; ++x) {
      for (std::int64_t y = 0; y <= side; ++y) {
        const GridPoint g{level, x, y};
        const auto s = encode_point(g);
        REQUIRE(s.size() == static_cast<std::size_t>(level));
        CHECK(decode_point(s) == g);
      }
    }
  }
}

TEST_CASE("walk strings end at the nearest point") {
  Rng rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    const Point p = rng.point();
    const int level = static_cast<int>(rng.between(1, 20));
    CHECK(decode_point(walk_string(p, level)) == nearest_grid_point(p, level));
  }
}

TEST_CASE("distribution string examples") {
  CHECK(fmt(encode_distribution(GridDistribution::of(1, std::vector<GridIndex>{{0, 0}, {0, 0}})).symbols) ==
        "I,I");
  CHECK(fmt(encode_distribution(GridDistribution::of(1, std::vector<GridIndex>{{0, 0}, {1, 1}})).symbols) ==
        "I,NE");
  // (0.5,0.5) and (1,1) at level 2
  const auto s = encode_distribution(GridDistribution::of(2, std::vector<GridIndex>{{1, 1}, {2, 2}}));
  CHECK(fmt(s.symbols) == "I,NE,NE,I");
  CHECK(s.count == 2);
  CHECK(s.level == 2);
}

TEST_CASE("interleave sorts lexicographically") {
  Rng rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.between(1, 8);
    const std::size_t len = rng.between(1, 6);
    std::vector<PointString> strings(n);
    for (auto& s : strings) {
      for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<Direction>(rng.below(9)));
    }
    auto sorted = strings;
    std::sort(sorted.begin(), sorted.end());
    const auto out = interleave(strings);
    for (std::size_t col = 0; col < len; ++col) {
      for (std::size_t k = 0; k < n; ++k) CHECK(out.symbols[col * n + k] == sorted[k][col]);
    }
  }
}

TEST_CASE("decode_levels recovers every level") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int level = static_cast<int>(rng.between(1, 12));
    const std::size_t n = rng.between(1, 8);
    std::vector<GridIndex> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(random_grid_point(rng, level).index());
    const auto g = GridDistribution::of(level, pts);
    const auto levels = decode_levels(encode_distribution(g));
    REQUIRE(levels.size() == static_cast<std::size_t>(level));
    CHECK(levels.back() == g);
  }
}

TEST_CASE("coarser distributions are prefixes") {
  Rng rng(24);
  for (int trial = 0; trial < 500; ++trial) {
    const int level = static_cast<int>(rng.between(2, 12));
    const std::size_t n = rng.between(1, 8);
    std::vector<GridIndex> fine, coarse;
    for (std::size_t i = 0; i < n; ++i) {
      const GridPoint g = random_grid_point(rng, level);
      fine.push_back(g.index());
      coarse.push_back(parent(g).index());
    }
    const auto a = encode_distribution(GridDistribution::of(level - 1, coarse));
    const auto b = encode_distribution(GridDistribution::of(level, fine));
    CHECK(is_prefix(a.symbols, b.symbols));
  }
}

TEST_CASE("lazy query blocks") {
  SUBCASE("single point") {
    LazyQueryState q({{0.3, 0.6}});
    CHECK(fmt(q.next_block()) == "N");
    CHECK(fmt(q.next_block()) == "SE");
    CHECK(q.level() == 2);
    CHECK(q.distribution() == GridDistribution::nearest(std::vector<Point>{{0.3, 0.6}}, 2));
  }
  SUBCASE("duplicate origin points") {
    LazyQueryState q({{0, 0}, {0, 0}});
    CHECK(fmt(q.next_block()) == "I,I");
  }
}

TEST_CASE("lazy blocks equal the interleaved walk strings") {
  Rng rng(25);
  for (int trial = 0; trial < 300; ++trial) {
    const auto set = rng.point_set("p", rng.between(1, 8));
    const int level = static_cast<int>(rng.between(1, 14));
    std::vector<PointString> walks;
    for (const Point& p : set.points) walks.push_back(walk_string(p, level));
    const auto expect = interleave(walks);

    LazyQueryState q(set.points);
    std::vector<Direction> got;
    for (int d = 1; d <= level; ++d) {
      const auto block = q.next_block();
      got.insert(got.end(), block.begin(), block.end());
    }
    CHECK(got == expect.symbols);
    CHECK(q.distribution() == GridDistribution::nearest(set.points, level));
  }
}
