#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bneck/compact_index.hpp"
#include "bneck/multisnap_index.hpp"

namespace bneck {

/// Malformed or invalid input files.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- datasets: one JSON object per line, {"id": ..., "points": [[x, y], ...]}

nlohmann::json to_json(const PointSet& set);
PointSet point_set_from_json(const nlohmann::json& j);

/// Throws DatasetError naming the offending line.
std::vector<PointSet> read_dataset(std::istream& in, const std::string& source = "<input>");
std::vector<PointSet> read_dataset_file(const std::string& path);

/// `sources`, when non-empty, adds a "source" field per record.
void write_dataset(std::ostream& out, std::span<const PointSet> sets,
                   std::span<const std::string> sources = {});

// --- indexes on disk (layout in docs/index-format.md)

enum class IndexKind { Compact, MultiSnap };
std::string_view to_string(IndexKind k) noexcept;
IndexKind parse_index_kind(std::string_view s);

using AnyIndex = std::variant<CompactIndex, MultiSnapIndex>;

struct BuildOptions {
  IndexKind kind = IndexKind::Compact;
  int max_level = kDefaultMaxLevel;
  std::uint64_t multisnap_budget = 1'000'000;
  MatchingOptions matching{};
};

AnyIndex build_index(std::span<const PointSet> sets, const BuildOptions& opts);
IndexKind kind_of(const AnyIndex& idx) noexcept;
const Registry& registry_of(const AnyIndex& idx) noexcept;
const TrieMap& tries_of(const AnyIndex& idx) noexcept;
int max_level_of(const AnyIndex& idx) noexcept;

void save_index(std::ostream& out, const AnyIndex& idx);
AnyIndex load_index(std::istream& in);
bool is_index_file(const std::string& path);

/// Runs one query. Multisnap indexes only support nearest queries and
/// ignore the strategy.
QueryResult run_query(const AnyIndex& idx, const PointSet& q, QueryMode mode, Strategy strategy);

// --- reports

struct ReportOptions {
  bool rescore = false;
  bool timings = true;
};

/// Exact distance between a stored set and the query under the mode's
/// definition (bijection, best sub-multiset of Q, best sub-multiset of P).
double exact_mode_distance(const PointSet& stored, const PointSet& q, QueryMode mode);

nlohmann::json make_report(const PointSet& q, QueryMode mode, const QueryResult& r,
                           const Registry& registry, const ReportOptions& opts,
                           double elapsed_ms);

// --- synthetic data

struct GenConfig {
  std::size_t sets = 100;
  std::size_t min_size = 1;
  std::size_t max_size = 6;
  std::size_t queries = 0;  // 0: one per stored set
  std::uint64_t seed = 1;
  double eps = 0.01;
};

struct Generated {
  std::vector<PointSet> database;
  std::vector<PointSet> queries;
  std::vector<std::string> sources;  // stored id each query was perturbed from
};

Generated generate(const GenConfig& cfg);

}  // namespace bneck
