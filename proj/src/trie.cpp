#include "bneck/trie.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace bneck {

namespace {
constexpr unsigned char kPop = 0xFF;
}

void write_varint(std::ostream& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.put(static_cast<char>((v & 0x7F) | 0x80));
    v >>= 7;
  }
  out.put(static_cast<char>(v));
}

std::uint64_t read_varint(std::istream& in) {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("truncated varint");
    v |= static_cast<std::uint64_t>(c & 0x7F) << shift;
    if (!(c & 0x80)) return v;
  }
  throw std::runtime_error("varint too long");
}

Trie::Trie(std::size_t cardinality) : cardinality_(cardinality), nodes_(1) {
  if (cardinality == 0) throw std::invalid_argument("trie cardinality must be positive");
}

NodeId Trie::insert(std::span<const Direction> s, SetHandle owner) {
  return insert_from(kRoot, s, owner);
}

NodeId Trie::insert(const DistributionString& s, SetHandle owner) {
  if (s.count != cardinality_) {
    throw std::invalid_argument("distribution block size " + std::to_string(s.count) +
                                " does not match trie cardinality " +
                                std::to_string(cardinality_));
  }
  return insert(std::span<const Direction>(s.symbols), owner);
}

NodeId Trie::insert_from(NodeId start, std::span<const Direction> s, SetHandle owner) {
  if ((nodes_.at(start).depth + s.size()) % cardinality_ != 0) {
    throw std::invalid_argument("inserted string does not end on a block boundary");
  }
  NodeId cur = start;
  for (Direction d : s) {
    const auto slot = static_cast<std::size_t>(d);
    NodeId next = nodes_[cur].child[slot];
    if (next == kNone) {
      next = static_cast<NodeId>(nodes_.size());
      Node fresh;
      fresh.depth = nodes_[cur].depth + 1;
      nodes_.push_back(std::move(fresh));
      nodes_[cur].child[slot] = next;
    }
    cur = next;
    Node& node = nodes_[cur];
    if (node.depth % cardinality_ == 0 &&
        std::find(node.finishers.begin(), node.finishers.end(), owner) == node.finishers.end()) {
      node.finishers.push_back(owner);
    }
  }
  return cur;
}

Trie::WalkResult Trie::walk_from(NodeId start, std::span<const Direction> s) const {
  WalkResult r{start, 0};
  for (Direction d : s) {
    const NodeId next = child(r.node, d);
    if (next == kNone) break;
    r.node = next;
    ++r.consumed;
  }
  return r;
}

std::vector<std::pair<Direction, NodeId>> Trie::children_with_states(NodeId id) const {
  std::vector<std::pair<Direction, NodeId>> out;
  const Node& n = nodes_.at(id);
  for (std::size_t s = 0; s < kAlphabetSize; ++s) {
    if (n.child[s] != kNone) out.emplace_back(static_cast<Direction>(s), n.child[s]);
  }
  return out;
}

std::size_t Trie::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) {
    return std::all_of(n.child.begin(), n.child.end(), [](NodeId c) { return c == kNone; });
  }));
}

void Trie::serialize(std::ostream& out) const {
  struct Frame {
    NodeId node;
    std::size_t next_slot;
  };
  auto emit_node = [&](NodeId id) {
    const Node& n = nodes_[id];
    write_varint(out, n.finishers.size());
    for (SetHandle h : n.finishers) write_varint(out, h);
  };

  std::vector<Frame> stack{{kRoot, 0}};
  emit_node(kRoot);
  while (!stack.empty()) {
    Frame& top = stack.back();
    const Node& n = nodes_[top.node];
    while (top.next_slot < kAlphabetSize && n.child[top.next_slot] == kNone) ++top.next_slot;
    if (top.next_slot == kAlphabetSize) {
      out.put(static_cast<char>(kPop));
      stack.pop_back();
      continue;
    }
    const std::size_t slot = top.next_slot++;
    const NodeId c = n.child[slot];
    out.put(static_cast<char>(slot));
    emit_node(c);
    stack.push_back({c, 0});
  }
}

Trie Trie::deserialize(std::istream& in, std::size_t cardinality) {
  Trie t(cardinality);
  auto read_node = [&](NodeId id) {
    const std::uint64_t count = read_varint(in);
    auto& fin = t.nodes_[id].finishers;
    fin.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) fin.push_back(static_cast<SetHandle>(read_varint(in)));
  };

  read_node(kRoot);
  std::vector<NodeId> stack{kRoot};
  while (!stack.empty()) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("truncated trie stream");
    if (c == kPop) {
      stack.pop_back();
      continue;
    }
    if (c >= static_cast<int>(kAlphabetSize)) throw std::runtime_error("bad symbol in trie stream");
    const NodeId parent_id = stack.back();
    if (t.nodes_[parent_id].child[static_cast<std::size_t>(c)] != kNone) {
      throw std::runtime_error("duplicate edge in trie stream");
    }
    const auto id = static_cast<NodeId>(t.nodes_.size());
    Node fresh;
    fresh.depth = t.nodes_[parent_id].depth + 1;
    t.nodes_.push_back(std::move(fresh));
    t.nodes_[parent_id].child[static_cast<std::size_t>(c)] = id;
    read_node(id);
    stack.push_back(id);
  }
  return t;
}

}  // namespace bneck
