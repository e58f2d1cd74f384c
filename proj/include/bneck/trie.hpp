#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "bneck/encoding.hpp"

namespace bneck {

using NodeId = std::uint32_t;
using SetHandle = std::uint32_t;

/// 9-ary prefix tree over direction symbols. Every stored string has blocks
/// of `cardinality` symbols; owners are recorded at block boundaries.
class Trie {
 public:
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNone = 0;  // the root is never anyone's child

  struct Node {
    std::array<NodeId, kAlphabetSize> child{};
    std::uint32_t depth = 0;
    std::vector<SetHandle> finishers;
  };

  explicit Trie(std::size_t cardinality);

  std::size_t cardinality() const noexcept { return cardinality_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }

  /// Adds the path for s and appends owner to the finisher list of every
  /// block-boundary node on it (at most once per node). Returns the last node.
  NodeId insert(std::span<const Direction> s, SetHandle owner);
  NodeId insert(const DistributionString& s, SetHandle owner);

  /// Continues an insertion from an existing node.
  NodeId insert_from(NodeId start, std::span<const Direction> s, SetHandle owner);

  struct WalkResult {
    NodeId node = kRoot;
    std::size_t consumed = 0;
  };
  WalkResult walk(std::span<const Direction> s) const { return walk_from(kRoot, s); }
  WalkResult walk_from(NodeId start, std::span<const Direction> s) const;

  NodeId child(NodeId id, Direction d) const {
    return nodes_[id].child[static_cast<std::size_t>(d)];
  }

  /// Existing children in symbol order.
  std::vector<std::pair<Direction, NodeId>> children_with_states(NodeId id) const;

  std::size_t leaf_count() const;

  /// Preorder stream; see docs/index-format.md.
  void serialize(std::ostream& out) const;
  static Trie deserialize(std::istream& in, std::size_t cardinality);

 private:
  std::size_t cardinality_;
  std::vector<Node> nodes_;
};

// Unsigned LEB128, shared by the on-disk formats.
void write_varint(std::ostream& out, std::uint64_t v);
std::uint64_t read_varint(std::istream& in);

}  // namespace bneck
