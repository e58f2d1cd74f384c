#include "bneck/harness.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "bneck/matching.hpp"
#include "bneck/random.hpp"

namespace bneck {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'B', 'N', 'E', 'C', 'K', 'I', 'X', '1'};

void write_f64(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.put(static_cast<char>(bits & 0xFF));
    bits >>= 8;
  }
}

double read_f64(std::istream& in) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw DatasetError("truncated index file");
    bits |= static_cast<std::uint64_t>(c & 0xFF) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

void write_registry(std::ostream& out, const Registry& reg) {
  write_varint(out, reg.size());
  for (const PointSet& s : reg.sets()) {
    write_varint(out, s.id.size());
    out.write(s.id.data(), static_cast<std::streamsize>(s.id.size()));
    write_varint(out, s.size());
    for (const Point& p : s.points) {
      write_f64(out, p.x);
      write_f64(out, p.y);
    }
  }
}

Registry read_registry(std::istream& in) {
  Registry reg;
  const auto count = read_varint(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    PointSet s;
    s.id.resize(static_cast<std::size_t>(read_varint(in)));
    in.read(s.id.data(), static_cast<std::streamsize>(s.id.size()));
    const auto n = read_varint(in);
    for (std::uint64_t k = 0; k < n; ++k) {
      const double x = read_f64(in);
      const double y = read_f64(in);
      s.points.push_back({x, y});
    }
    reg.add(std::move(s));
  }
  return reg;
}

void write_tries(std::ostream& out, const TrieMap& tries) {
  write_varint(out, tries.size());
  for (const auto& [k, trie] : tries) {
    write_varint(out, k);
    trie.serialize(out);
  }
}

TrieMap read_tries(std::istream& in) {
  TrieMap tries;
  const auto count = read_varint(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(read_varint(in));
    tries.emplace(k, Trie::deserialize(in, k));
  }
  return tries;
}

}  // namespace

json to_json(const PointSet& set) {
  json pts = json::array();
  for (const Point& p : set.points) pts.push_back({p.x, p.y});
  return json{{"id", set.id}, {"points", std::move(pts)}};
}

PointSet point_set_from_json(const json& j) {
  if (!j.is_object()) throw DatasetError("record is not an object");
  if (!j.contains("id") || !j["id"].is_string()) throw DatasetError("record lacks a string 'id'");
  if (!j.contains("points") || !j["points"].is_array()) {
    throw DatasetError("record lacks a 'points' array");
  }
  PointSet s;
  s.id = j["id"].get<std::string>();
  for (const json& p : j["points"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw DatasetError("point in '" + s.id + "' is not an [x, y] pair");
    }
    s.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  try {
    validate_point_set(s);
  } catch (const std::invalid_argument& e) {
    throw DatasetError(e.what());
  }
  return s;
}

std::vector<PointSet> read_dataset(std::istream& in, const std::string& source) {
  std::vector<PointSet> sets;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      PointSet s = point_set_from_json(json::parse(line));
      if (!ids.insert(s.id).second) throw DatasetError("duplicate id '" + s.id + "'");
      sets.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw DatasetError(source + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const DatasetError& e) {
      throw DatasetError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return sets;
}

std::vector<PointSet> read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path);
  return read_dataset(in, path);
}

void write_dataset(std::ostream& out, std::span<const PointSet> sets,
                   std::span<const std::string> sources) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    json j = to_json(sets[i]);
    if (!sources.empty()) j["source"] = sources[i];
    out << j.dump() << '\n';
  }
}

std::string_view to_string(IndexKind k) noexcept {
  return k == IndexKind::Compact ? "compact" : "multisnap";
}

IndexKind parse_index_kind(std::string_view s) {
  if (s == "compact") return IndexKind::Compact;
  if (s == "multisnap") return IndexKind::MultiSnap;
  throw std::invalid_argument("unknown index kind '" + std::string(s) + "'");
}

AnyIndex build_index(std::span<const PointSet> sets, const BuildOptions& opts) {
  if (opts.kind == IndexKind::Compact) {
    CompactIndex idx(CompactConfig{opts.max_level, opts.matching});
    for (const PointSet& s : sets) idx.insert(s);
    return idx;
  }
  MultiSnapIndex idx(MultiSnapConfig{opts.max_level, opts.multisnap_budget});
  for (const PointSet& s : sets) idx.insert(s);
  return idx;
}

IndexKind kind_of(const AnyIndex& idx) noexcept {
  return std::holds_alternative<CompactIndex>(idx) ? IndexKind::Compact : IndexKind::MultiSnap;
}

const Registry& registry_of(const AnyIndex& idx) noexcept {
  return std::visit([](const auto& i) -> const Registry& { return i.registry(); }, idx);
}

const TrieMap& tries_of(const AnyIndex& idx) noexcept {
  return std::visit([](const auto& i) -> const TrieMap& { return i.tries(); }, idx);
}

int max_level_of(const AnyIndex& idx) noexcept {
  return std::visit([](const auto& i) { return i.config().max_level; }, idx);
}

void save_index(std::ostream& out, const AnyIndex& idx) {
  out.write(kMagic, sizeof kMagic);
  if (const auto* c = std::get_if<CompactIndex>(&idx)) {
    out.put(0);
    write_varint(out, static_cast<std::uint64_t>(c->config().max_level));
    write_varint(out, static_cast<std::uint64_t>(c->config().matching.adjacency_steps));
  } else {
    const auto& m = std::get<MultiSnapIndex>(idx);
    out.put(1);
    write_varint(out, static_cast<std::uint64_t>(m.config().max_level));
    write_varint(out, m.config().budget);
  }
  write_registry(out, registry_of(idx));
  write_tries(out, tries_of(idx));
}

AnyIndex load_index(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw DatasetError("not an index file");
  }
  try {
    const int kind = in.get();
    const auto max_level = static_cast<int>(read_varint(in));
    const auto param = read_varint(in);
    Registry registry = read_registry(in);
    TrieMap tries = read_tries(in);
    if (kind == 0) {
      CompactConfig cfg{max_level, MatchingOptions{static_cast<int>(param)}};
      return CompactIndex::from_parts(cfg, std::move(registry), std::move(tries));
    }
    if (kind == 1) {
      return MultiSnapIndex::from_parts(MultiSnapConfig{max_level, param}, std::move(registry),
                                        std::move(tries));
    }
    throw DatasetError("unknown index kind in file");
  } catch (const std::runtime_error& e) {
    throw DatasetError(std::string("corrupt index file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DatasetError(std::string("corrupt index file: ") + e.what());
  }
}

bool is_index_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[sizeof kMagic];
  return in.read(magic, sizeof magic) && std::memcmp(magic, kMagic, sizeof kMagic) == 0;
}

QueryResult run_query(const AnyIndex& idx, const PointSet& q, QueryMode mode, Strategy strategy) {
  if (const auto* c = std::get_if<CompactIndex>(&idx)) return c->query(q, mode, strategy);
  if (mode != QueryMode::Nearest) {
    throw std::invalid_argument("multisnap index supports nearest queries only");
  }
  return std::get<MultiSnapIndex>(idx).query_nearest(q);
}

double exact_mode_distance(const PointSet& stored, const PointSet& q, QueryMode mode) {
  switch (mode) {
    case QueryMode::Nearest: return exact_bottleneck(stored, q);
    case QueryMode::Subset: return exact_partial_bottleneck(stored, q);
    case QueryMode::Superset: return exact_partial_bottleneck(q, stored);
  }
  return 0.0;
}

json make_report(const PointSet& q, QueryMode mode, const QueryResult& r, const Registry& registry,
                 const ReportOptions& opts, double elapsed_ms) {
  json report;
  report["query"] = q.id;
  report["mode"] = std::string(to_string(mode));

  json matches = json::array();
  if (opts.rescore) {
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& id : r.ids) {
      scored.emplace_back(exact_mode_distance(*registry.find(id), q, mode), id);
    }
    std::sort(scored.begin(), scored.end());
    for (const auto& [dist, id] : scored) matches.push_back({{"id", id}, {"distance", dist}});
  } else {
    for (const auto& id : r.ids) matches.push_back(id);
  }
  report["matches"] = std::move(matches);
  report["d_star"] = r.hit_level;
  report["certified_bound"] = r.ids.empty() ? json(nullptr) : json(r.certified_bound);
  report["claimed_bound"] = r.ids.empty() ? json(nullptr) : json(r.claimed_bound);

  json levels = json::array();
  for (const LevelStats& ls : r.levels) {
    json entry{{"level", ls.level},
               {"states", ls.states},
               {"matching_calls", ls.matching_calls},
               {"hits", ls.hits}};
    if (opts.timings) entry["time_ms"] = ls.elapsed_ms;
    levels.push_back(std::move(entry));
  }
  report["levels"] = std::move(levels);
  if (opts.timings) report["time_ms"] = elapsed_ms;
  return report;
}

Generated generate(const GenConfig& cfg) {
  if (cfg.min_size == 0 || cfg.min_size > cfg.max_size) {
    throw std::invalid_argument("generate: need 1 <= min_size <= max_size");
  }
  if (cfg.eps < 0.0) throw std::invalid_argument("generate: eps must be non-negative");
  Rng rng(cfg.seed);
  Generated out;
  const std::size_t width = std::to_string(cfg.sets).size();
  auto padded = [&](char prefix, std::size_t i) {
    std::string digits = std::to_string(i);
    return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
  };
  for (std::size_t i = 0; i < cfg.sets; ++i) {
    out.database.push_back(rng.point_set(padded('s', i), rng.between(cfg.min_size, cfg.max_size)));
  }
  if (out.database.empty()) return out;
  const std::size_t queries = cfg.queries == 0 ? cfg.sets : cfg.queries;
  for (std::size_t i = 0; i < queries; ++i) {
    const PointSet& src = out.database[rng.below(out.database.size())];
    out.queries.push_back(rng.perturb(src, cfg.eps, padded('q', i)));
    out.sources.push_back(src.id);
  }
  return out;
}

}  // namespace bneck
