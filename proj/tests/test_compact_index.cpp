#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bneck/compact_index.hpp"
#include "bneck/matching.hpp"
#include "bneck/random.hpp"
#include "oracles.hpp"

using namespace bneck;

namespace {

std::string fmt_prefix(const std::vector<Direction>& s, std::size_t len) {
  return format_symbols(std::span(s).first(len));
}

CompactIndex random_db(Rng& rng, std::size_t m, std::size_t max_n, int max_level) {
  CompactIndex idx(CompactConfig{max_level, {}});
  for (std::size_t i = 0; i < m; ++i) {
    idx.insert(rng.point_set("s" + std::to_string(i), rng.between(1, max_n)));
  }
  return idx;
}

}  // namespace

TEST_CASE("path strings") {
  const auto origin = CompactIndex::path_string({"a", {{0, 0}}}, 5);
  CHECK(format_symbols(origin) == "I,I,I,I,I");
  const auto p = CompactIndex::path_string({"b", {{0.3, 0.6}}}, 5);
  CHECK(fmt_prefix(p, 2) == "N,SE");
}

TEST_CASE("one trie per cardinality, shared prefixes") {
  CompactIndex idx(CompactConfig{10, {}});
  idx.insert({"a", {{0.1, 0.1}}});
  idx.insert({"b", {{0.1, 0.1}, {0.9, 0.9}}});
  idx.insert({"c", {{0.11, 0.1}, {0.9, 0.9}}});
  CHECK(idx.tries().size() == 2);
  CHECK(idx.sets_with_size(2) == 2);
  CHECK(idx.sets_with_size(3) == 0);

  // b and c agree on levels 1..3, so their paths share 3 * 2 symbols.
  const auto pb = CompactIndex::path_string(idx.registry().at(1), 10);
  const auto pc = CompactIndex::path_string(idx.registry().at(2), 10);
  std::size_t common = 0;
  while (common < pb.size() && pb[common] == pc[common]) ++common;
  CHECK(common >= 6);
  const Trie& t2 = idx.tries().at(2);
  CHECK(t2.node_count() == 1 + common + 2 * (pb.size() - common));
}

TEST_CASE("rejects invalid sets") {
  CompactIndex idx;
  CHECK_THROWS_AS(idx.insert({"x", {{1.2, 0}}}), std::invalid_argument);
  idx.insert({"a", {{0.5, 0.5}}});
  CHECK_THROWS_AS(idx.insert({"a", {{0.2, 0.5}}}), std::invalid_argument);
}

TEST_CASE("nearest query examples") {
  CompactIndex idx(CompactConfig{12, {}});
  idx.insert({"P1", {{0.1, 0.1}}});
  idx.insert({"P2", {{0.9, 0.9}}});

  SUBCASE("stored set queried exactly") {
    const auto r = idx.query_nearest({"q", {{0.9, 0.9}}});
    CHECK(r.hit_level == 12);
    CHECK(r.ids == std::vector<std::string>{"P2"});
  }
  SUBCASE("perturbed query") {
    const PointSet q{"q", {{0.12, 0.1}}};
    const auto r = idx.query_nearest(q);
    REQUIRE(r.ids == std::vector<std::string>{"P1"});
    const double d1 = exact_bottleneck(idx.registry().at(0), q);
    const double d2 = exact_bottleneck(idx.registry().at(1), q);
    CHECK(d1 == doctest::Approx(0.02));
    CHECK(d1 <= d2);
    CHECK(d1 <= 4 * delta(r.hit_level));
    CHECK(r.certified_bound == 4 * delta(r.hit_level));
  }
  SUBCASE("no stored set of that size") {
    const auto r = idx.query_nearest({"q", {{0.1, 0.1}, {0.2, 0.2}}});
    CHECK(r.ids.empty());
    CHECK(r.hit_level == 0);
    CHECK(std::isinf(r.certified_bound));
  }
}

TEST_CASE("subset queries") {
  SUBCASE("stored set inside the query") {
    CompactIndex idx(CompactConfig{10, {}});
    idx.insert({"P", {{0.5, 0.5}}});
    const auto r = idx.query_subset({"q", {{0.5, 0.5}, {0.9, 0.9}}});
    CHECK(r.ids == std::vector<std::string>{"P"});
    CHECK(r.hit_level == 10);
  }
  SUBCASE("perturbed") {
    CompactIndex idx(CompactConfig{14, {}});
    idx.insert({"P", {{0.52, 0.5}}});
    const PointSet q{"q", {{0.5, 0.5}, {0.9, 0.1}}};
    const auto r = idx.query_subset(q);
    REQUIRE(r.ids == std::vector<std::string>{"P"});
    double best = INFINITY;
    for (const Point& p : q.points) best = std::min(best, oracle::l1(p, {0.52, 0.5}));
    CHECK(best == doctest::Approx(0.02));
    CHECK(exact_partial_bottleneck(idx.registry().at(0), q) == doctest::Approx(best));
    CHECK(best <= 4 * delta(r.hit_level));
  }
}

TEST_CASE("superset queries") {
  CompactIndex idx(CompactConfig{10, {}});
  idx.insert({"P", {{0.1, 0.1}, {0.9, 0.9}}});
  idx.insert({"S", {{0.4, 0.4}}});
  const auto r = idx.query_superset({"q", {{0.9, 0.9}}});
  CHECK(r.ids == std::vector<std::string>{"P"});
  CHECK(r.hit_level == 10);
  // Larger than every stored set.
  const auto none = idx.query_superset({"q", {{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}}});
  CHECK(none.ids.empty());
}

TEST_CASE("nearest and subset agree when all sets have the query's size") {
  Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    CompactIndex idx(CompactConfig{12, {}});
    const std::size_t n = rng.between(1, 4);
    for (int i = 0; i < 10; ++i) idx.insert(rng.point_set("s" + std::to_string(i), n));
    const auto q = rng.perturb(idx.registry().at(rng.below(10)), 0.01, "q");
    const auto a = idx.query_nearest(q);
    const auto b = idx.query_subset(q);
    CHECK(a.ids == b.ids);
    CHECK(a.hit_level == b.hit_level);
  }
}

TEST_CASE("strategies agree") {
  Rng rng(52);
  for (int trial = 0; trial < 40; ++trial) {
    const auto idx = random_db(rng, 15, 4, 14);
    const auto& src = idx.registry().at(rng.below(idx.registry().size()));
    const auto q = rng.perturb(src, rng.log_uniform(1e-4, 0.1), "q");
    for (QueryMode mode : {QueryMode::Nearest, QueryMode::Subset, QueryMode::Superset}) {
      const auto a = idx.query(q, mode, Strategy::PerNode);
      const auto b = idx.query(q, mode, Strategy::LeafOnly);
      const auto c = idx.query(q, mode, Strategy::Auto);
      CHECK(a.ids == b.ids);
      CHECK(a.hit_level == b.hit_level);
      CHECK(a.ids == c.ids);
      // Leaf-only never prunes earlier, so it visits at least as many states.
      for (std::size_t l = 0; l < a.levels.size() && l < b.levels.size(); ++l) {
        CHECK(a.levels[l].states <= b.levels[l].states);
      }
    }
  }
}

TEST_CASE("hit-level windows on random pairs") {
  Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.between(1, 5);
    const auto p = rng.point_set("p", n);
    const auto q = rng.perturb(p, rng.log_uniform(1e-4, 0.3), "q");
    CompactIndex idx(CompactConfig{16, {}});
    idx.insert(p);
    const auto r = idx.query_nearest(q);
    REQUIRE(r.hit_level >= 1);
    const double db = exact_bottleneck(p, q);
    CHECK(db <= 4 * delta(r.hit_level));
    // Any level finer than the hit level with delta > 2 d_B would have hit.
    if (r.hit_level < 16) CHECK(delta(r.hit_level + 1) <= 2 * db);
  }
}
