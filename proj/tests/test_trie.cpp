#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "bneck/random.hpp"
#include "bneck/trie.hpp"

using namespace bneck;
using D = Direction;

namespace {

std::string bytes(const Trie& t) {
  std::ostringstream out;
  t.serialize(out);
  return out.str();
}

Trie round_trip(const Trie& t) {
  std::istringstream in(bytes(t));
  return Trie::deserialize(in, t.cardinality());
}

}  // namespace

TEST_CASE("insert builds one path with finishers at block ends") {
  Trie t(2);
  const std::vector s{D::I, D::NE};
  const NodeId leaf = t.insert(s, 7);
  CHECK(t.node_count() == 3);
  CHECK(t.node(leaf).depth == 2);
  CHECK(t.node(leaf).finishers == std::vector<SetHandle>{7});
  CHECK(t.node(t.child(Trie::kRoot, D::I)).finishers.empty());

  const std::string before = bytes(t);
  t.insert(s, 7);
  CHECK(bytes(t) == before);
  CHECK(t.node(leaf).finishers.size() == 1);
}

TEST_CASE("insert rejects strings that stop mid-block") {
  Trie t(2);
  CHECK_THROWS_AS(t.insert(std::vector{D::I}, 0), std::invalid_argument);
  DistributionString s{3, 1, {D::I, D::I, D::I}};
  CHECK_THROWS_AS(t.insert(s, 0), std::invalid_argument);
}

TEST_CASE("two single-point strings branch at the root") {
  Trie t(1);
  const NodeId a = t.insert(std::vector{D::I}, 0);
  const NodeId b = t.insert(std::vector{D::N}, 1);
  const auto kids = t.children_with_states(Trie::kRoot);
  REQUIRE(kids.size() == 2);
  CHECK(kids[0].first == D::I);
  CHECK(kids[1].first == D::N);
  CHECK(t.node(a).finishers == std::vector<SetHandle>{0});
  CHECK(t.node(b).finishers == std::vector<SetHandle>{1});
  CHECK(t.children_with_states(a).empty());
}

TEST_CASE("all nine children come back in symbol order") {
  Trie t(1);
  for (std::size_t s = kAlphabetSize; s-- > 0;) t.insert(std::vector{static_cast<D>(s)}, 0);
  const auto kids = t.children_with_states(Trie::kRoot);
  REQUIRE(kids.size() == kAlphabetSize);
  for (std::size_t s = 0; s < kAlphabetSize; ++s) CHECK(kids[s].first == static_cast<D>(s));
  CHECK(t.leaf_count() == kAlphabetSize);
}

TEST_CASE("walk") {
  Trie empty(2);
  auto r = empty.walk(std::vector{D::I, D::NE});
  CHECK(r.node == Trie::kRoot);
  CHECK(r.consumed == 0);

  Trie t(2);
  const NodeId leaf = t.insert(std::vector{D::I, D::NE}, 0);
  r = t.walk(std::vector{D::I, D::NE});
  CHECK(r.node == leaf);
  CHECK(r.consumed == 2);
  r = t.walk(std::vector{D::I, D::SW});
  CHECK(t.node(r.node).depth == 1);
  CHECK(r.consumed == 1);
}

TEST_CASE("insert_from continues a path") {
  Trie t(2);
  const NodeId mid = t.insert(std::vector{D::I, D::NE}, 0);
  const NodeId end = t.insert_from(mid, std::vector{D::N, D::E}, 0);
  CHECK(t.node(end).depth == 4);
  CHECK(t.walk(std::vector{D::I, D::NE, D::N, D::E}).node == end);
}

TEST_CASE("serialization round trip is stable") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = rng.between(1, 5);
    Trie t(k);
    const std::size_t strings = rng.between(0, 30);
    for (std::size_t i = 0; i < strings; ++i) {
      std::vector<Direction> s(k * rng.between(1, 6));
      for (auto& d : s) d = static_cast<Direction>(rng.below(3));  // small alphabet, more sharing
      t.insert(s, static_cast<SetHandle>(rng.below(300)));
    }
    const Trie back = round_trip(t);
    CHECK(back.node_count() == t.node_count());
    CHECK(back.leaf_count() == t.leaf_count());
    CHECK(bytes(back) == bytes(t));
    CHECK(bytes(round_trip(back)) == bytes(t));
  }
}

TEST_CASE("corrupt streams are rejected") {
  Trie t(1);
  t.insert(std::vector{D::N, D::E}, 3);
  std::string data = bytes(t);
  std::istringstream truncated(data.substr(0, data.size() - 1));
  CHECK_THROWS(Trie::deserialize(truncated, 1));
  data[1] = 42;  // not a symbol
  std::istringstream bad(data);
  CHECK_THROWS(Trie::deserialize(bad, 1));
}

TEST_CASE("varints") {
  for (std::uint64_t v : {0ull, 1ull, 127ull, 128ull, 300ull, 1ull << 40, ~0ull}) {
    std::stringstream s;
    write_varint(s, v);
    CHECK(read_varint(s) == v);
  }
}
