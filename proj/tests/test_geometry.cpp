#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bneck/geometry.hpp"
#include "bneck/random.hpp"
#include "oracles.hpp"

using namespace bneck;

namespace {

std::vector<GridIndex> indices(const std::vector<GridPoint>& pts) {
  std::vector<GridIndex> out;
  for (const auto& g : pts) out.push_back(g.index());
  return out;
}

}  // namespace

TEST_CASE("delta halves per level") {
  CHECK(delta(1) == 1.0);
  CHECK(delta(3) == 0.25);
  CHECK(delta(11) == 0.0009765625);
  CHECK_THROWS_AS(delta(0), std::invalid_argument);
  CHECK_THROWS_AS(delta(kMaxSupportedLevel + 1), std::invalid_argument);
}

TEST_CASE("distances") {
  CHECK(l1_dist({0, 0}, {0.3, 0.1}) == doctest::Approx(0.4));
  CHECK(l1_dist({0.2, 0.7}, {0.2, 0.7}) == 0.0);
  CHECK(l1_dist({0, 0}, {1, 1}) == 2.0);
  CHECK(linf_dist({0, 0}, {0.3, 0.1}) == doctest::Approx(0.3));
  CHECK(linf_dist({0.2, 0.7}, {0.2, 0.7}) == 0.0);
  CHECK(linf_dist({0, 0}, {1, 1}) == 1.0);
}

TEST_CASE("nearest grid point examples") {
  CHECK(nearest_grid_point({0.3, 0.6}, 1) == GridPoint{1, 0, 1});
  CHECK(nearest_grid_point({0.25, 0.25}, 2) == GridPoint{2, 0, 0});
  CHECK(nearest_grid_point({0.3, 0.6}, 2) == GridPoint{2, 1, 1});
  // Same answers from the enumeration oracle.
  CHECK(oracle::nearest({0.3, 0.6}, 1) == GridIndex{0, 1});
  CHECK(oracle::nearest({0.25, 0.25}, 2) == GridIndex{0, 0});
  CHECK(oracle::nearest({0.3, 0.6}, 2) == GridIndex{1, 1});
}

TEST_CASE("nearest grid point agrees with enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    const int level = static_cast<int>(rng.between(1, 7));
    Point p = rng.point();
    // Put a third of the points on exact half-ties.
    if (trial % 3 == 0) {
      const double h = delta(level);
      p.x = (static_cast<double>(rng.below(static_cast<std::size_t>(cells_per_side(level)))) + 0.5) * h;
    }
    CHECK(nearest_grid_point(p, level).index() == oracle::nearest(p, level));
  }
}

TEST_CASE("level 0 is the origin") {
  CHECK(nearest_grid_point_level0({0.9, 0.9}) == GridPoint::origin());
  CHECK(nearest_grid_point_level0({0, 0}) == GridPoint::origin());
  CHECK(nearest_grid_point_level0({1, 1}) == GridPoint::origin());
}

TEST_CASE("snap candidate examples") {
  CHECK(indices(snap_candidates({0.3, 0.6}, 1)) ==
        std::vector<GridIndex>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(indices(snap_candidates({0, 0.5}, 1)) == std::vector<GridIndex>{{0, 0}, {0, 1}});
  CHECK(indices(snap_candidates({0.5, 0.5}, 2)) == std::vector<GridIndex>{{1, 1}});
  CHECK(oracle::candidates({0.3, 0.6}, 1).size() == 4);
  CHECK(oracle::candidates({0, 0.5}, 1) == std::vector<GridIndex>{{0, 0}, {0, 1}});
  CHECK(oracle::candidates({0.5, 0.5}, 2) == std::vector<GridIndex>{{1, 1}});
}

TEST_CASE("snap candidates agree with enumeration") {
  Rng rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const int level = static_cast<int>(rng.between(1, 6));
    Point p = rng.point();
    if (trial % 4 == 0) p.y = std::round(p.y * 8) / 8;  // grid lines
    const auto got = indices(snap_candidates(p, level));
    CHECK(got == oracle::candidates(p, level));
    CHECK(got.size() <= 4);
  }
}

TEST_CASE("cell adjacency") {
  CHECK(cell_adjacent({2, 0, 0}, {2, 1, 1}));
  CHECK_FALSE(cell_adjacent({2, 0, 0}, {2, 2, 2}));
  CHECK(cell_adjacent({3, 2, 3}, {3, 2, 3}));
  CHECK_THROWS_AS(cell_adjacent({2, 0, 0}, {3, 0, 0}), std::invalid_argument);
}

TEST_CASE("parent is the coarser nearest point") {
  Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const int level = static_cast<int>(rng.between(2, 12));
    const auto side = static_cast<std::size_t>(cells_per_side(level)) + 1;
    const GridPoint g{level, static_cast<std::int64_t>(rng.below(side)),
                      static_cast<std::int64_t>(rng.below(side))};
    CHECK(parent(g) == nearest_grid_point(g.coords(), level - 1));
  }
  CHECK(parent({1, 1, 1}) == GridPoint::origin());
}

TEST_CASE("point set validation") {
  CHECK_NOTHROW(validate_point_set({"a", {{0, 0}, {1, 1}}}));
  CHECK_THROWS_AS(validate_point_set({"a", {{1.2, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_point_set({"a", {{0, -0.1}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_point_set({"a", {{NAN, 0.5}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_point_set({"a", {}}), std::invalid_argument);
}

TEST_CASE("grid distributions count multiplicity") {
  const std::vector<Point> pts{{0.1, 0.1}, {0.12, 0.1}, {0.9, 0.9}};
  const auto g = GridDistribution::nearest(pts, 2);
  CHECK(g.total() == 3);
  CHECK(g.distinct() == 2);
  CHECK(g.counts().at({0, 0}) == 2);
  CHECK(g.expand().size() == 3);
}
