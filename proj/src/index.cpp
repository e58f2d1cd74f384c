#include "bneck/index.hpp"

#include <stdexcept>

namespace bneck {

std::string_view to_string(QueryMode m) noexcept {
  switch (m) {
    case QueryMode::Nearest: return "nearest";
    case QueryMode::Subset: return "subset";
    case QueryMode::Superset: return "superset";
  }
  return "?";
}

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::PerNode: return "per-node";
    case Strategy::LeafOnly: return "leaf-only";
    case Strategy::Auto: return "auto";
  }
  return "?";
}

QueryMode parse_query_mode(std::string_view s) {
  if (s == "nearest") return QueryMode::Nearest;
  if (s == "subset") return QueryMode::Subset;
  if (s == "superset") return QueryMode::Superset;
  throw std::invalid_argument("unknown query mode '" + std::string(s) + "'");
}

Strategy parse_strategy(std::string_view s) {
  if (s == "per-node" || s == "per_node") return Strategy::PerNode;
  if (s == "leaf-only" || s == "leaf_only") return Strategy::LeafOnly;
  if (s == "auto") return Strategy::Auto;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

SetHandle Registry::add(PointSet set) {
  validate_point_set(set);
  if (by_id_.contains(set.id)) {
    throw std::invalid_argument("duplicate point set id '" + set.id + "'");
  }
  const auto h = static_cast<SetHandle>(sets_.size());
  by_id_.emplace(set.id, h);
  sets_.push_back(std::move(set));
  return h;
}

const PointSet* Registry::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &sets_[it->second];
}

std::size_t total_nodes(const TrieMap& tries) {
  std::size_t n = 0;
  for (const auto& [k, t] : tries) n += t.node_count();
  return n;
}

}  // namespace bneck
