#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bneck/harness.hpp"

namespace bneck {

/// One randomized validation check run on one instance. Everything needed to
/// rerun it is stored so a failure can be replayed from its JSON dump.
struct Counterexample {
  std::string check;
  IndexKind kind = IndexKind::Compact;
  int max_level = 0;
  int adjacency_steps = 1;
  std::vector<PointSet> database;
  PointSet query;
  std::string message;

  nlohmann::json to_json() const;
  static Counterexample from_json(const nlohmann::json& j);
};

struct ValidationConfig {
  IndexKind kind = IndexKind::Compact;
  std::size_t suite_size = 200;
  std::uint64_t seed = 1;
  int max_level = 14;
  MatchingOptions matching{};
};

/// Summary line: the worst value seen against the published constant and
/// the constant asserted here.
struct CheckRow {
  std::string name;
  std::size_t trials = 0;
  std::string statistic;
  double observed = 0.0;
  double claimed = 0.0;
  double safe_bound = 0.0;
  std::size_t over_claim = 0;
};

struct ValidationReport {
  std::vector<CheckRow> rows;
  std::optional<Counterexample> failure;
  bool ok() const noexcept { return !failure.has_value(); }
};

ValidationReport run_validation(const ValidationConfig& cfg);

/// Reruns the check recorded in a counterexample on its instance.
ValidationReport replay(const Counterexample& cx);

void print_report(std::ostream& out, const ValidationReport& report);

}  // namespace bneck
