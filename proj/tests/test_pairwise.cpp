#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bneck/matching.hpp"
#include "bneck/pairwise.hpp"
#include "bneck/random.hpp"

using namespace bneck;

TEST_CASE("identical sets sit at the resolution floor") {
  const PointSet p{"p", {{0.2, 0.3}, {0.7, 0.1}}};
  const auto r = approx_bottleneck(p, p, 12);
  CHECK(r.d_star == 12);
  CHECK(r.at_resolution_floor);
  CHECK(r.lower == 0.0);
  CHECK(r.upper == 4 * delta(12));
  CHECK(r.estimate > 0.0);
}

TEST_CASE("single point pair") {
  const PointSet p{"p", {{0, 0}}}, q{"q", {{0.3, 0.1}}};
  const auto r = approx_bottleneck(p, q);
  const double exact = exact_bottleneck(p, q);
  CHECK(exact == doctest::Approx(0.4));
  CHECK_FALSE(r.at_resolution_floor);
  CHECK(r.estimate >= exact / (2 * std::sqrt(2.0)));
  CHECK(r.estimate <= exact * 2 * std::sqrt(2.0));
  CHECK(exact >= r.lower);
  CHECK(exact <= r.upper);
}

TEST_CASE("size mismatch") {
  CHECK_THROWS_AS(approx_bottleneck({"p", {{0, 0}}}, {"q", {{0, 0}, {1, 1}}}), std::invalid_argument);
}

TEST_CASE("hard window on random pairs") {
  Rng rng(71);
  int floor_cases = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = rng.point_set("p", 6);
    const auto q = rng.below(2) ? rng.point_set("q", 6) : rng.perturb(p, rng.log_uniform(1e-5, 0.1), "q");
    const auto r = approx_bottleneck(p, q, 16);
    const double exact = exact_bottleneck(p, q);
    CHECK(exact <= r.upper);
    CHECK(exact >= r.lower);
    if (r.at_resolution_floor) ++floor_cases;
    CHECK(approx_bottleneck(q, p, 16).d_star == r.d_star);
  }
  MESSAGE("resolution floor cases: " << floor_cases);
}
