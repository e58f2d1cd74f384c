#include "bneck/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bneck/pairwise.hpp"
#include "bneck/random.hpp"

namespace bneck {

using nlohmann::json;

namespace {

struct Outcome {
  std::optional<std::string> failure;
  std::optional<double> statistic;
  bool over_claim = false;
};

struct CheckInfo {
  const char* name;
  const char* statistic;
  double claimed;
  double safe_bound;
};

double safe_factor(IndexKind k) {
  return k == IndexKind::Compact ? CompactIndex::kSafeBoundFactor : MultiSnapIndex::kSafeBoundFactor;
}
double claimed_factor(IndexKind k) {
  return k == IndexKind::Compact ? CompactIndex::kClaimedBoundFactor
                                 : MultiSnapIndex::kClaimedBoundFactor;
}

AnyIndex build_for(const Counterexample& c) {
  BuildOptions opts;
  opts.kind = c.kind;
  opts.max_level = c.max_level;
  opts.matching.adjacency_steps = c.adjacency_steps;
  return build_index(c.database, opts);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

Outcome check_oracle(const Counterexample& c) {
  const double exact = exact_bottleneck(c.database.at(0), c.query);
  const double brute = brute_force_bottleneck(c.database.at(0), c.query);
  Outcome o;
  o.statistic = std::abs(exact - brute);
  if (exact != brute) o.failure = "exact " + fmt(exact) + " != brute force " + fmt(brute);
  return o;
}

Outcome check_window(const Counterexample& c) {
  const AnyIndex idx = build_for(c);
  const QueryResult r = run_query(idx, c.query, QueryMode::Nearest, Strategy::PerNode);
  const double db = exact_bottleneck(c.database.at(0), c.query);
  Outcome o;
  if (r.hit_level >= 1) {
    const double ratio = db / delta(r.hit_level);
    o.statistic = ratio;
    o.over_claim = ratio > claimed_factor(c.kind);
    if (ratio > safe_factor(c.kind)) {
      o.failure = "hit at level " + std::to_string(r.hit_level) + " but distance " + fmt(db) +
                  " exceeds " + fmt(safe_factor(c.kind)) + " * delta";
      return o;
    }
  }
  for (int d = r.hit_level + 1; d <= c.max_level; ++d) {
    if (delta(d) > 2.0 * db) {
      o.failure = "no hit at level " + std::to_string(d) + " although delta " + fmt(delta(d)) +
                  " > 2 * distance " + fmt(db);
      return o;
    }
  }
  return o;
}

Outcome check_approximation(const Counterexample& c) {
  const AnyIndex idx = build_for(c);
  const QueryResult r = run_query(idx, c.query, QueryMode::Nearest, Strategy::Auto);
  double best = std::numeric_limits<double>::infinity();
  for (const PointSet& s : c.database) {
    if (s.size() == c.query.size()) best = std::min(best, exact_bottleneck(s, c.query));
  }
  Outcome o;
  if (r.ids.empty()) {
    if (std::isfinite(best) && 2.0 * best < delta(1)) {
      o.failure = "empty result although a set lies at distance " + fmt(best);
    }
    return o;
  }
  const double hard = 4.0 * safe_factor(c.kind);
  const double claimed = 4.0 * claimed_factor(c.kind);
  for (const auto& id : r.ids) {
    const double dist = exact_bottleneck(*registry_of(idx).find(id), c.query);
    if (dist > r.certified_bound) {
      o.failure = "returned '" + id + "' at distance " + fmt(dist) + " above certified bound " +
                  fmt(r.certified_bound);
      return o;
    }
    if (r.hit_level == c.max_level) continue;  // resolution floor: no ratio guarantee
    const double ratio = dist / best;
    o.statistic = std::max(o.statistic.value_or(0.0), ratio);
    o.over_claim = o.over_claim || ratio > claimed;
    if (ratio > hard) {
      o.failure = "returned '" + id + "' is " + fmt(ratio) + " times the optimum " + fmt(best);
      return o;
    }
  }
  return o;
}

Outcome check_strategy(const Counterexample& c) {
  Outcome o;
  const AnyIndex idx = build_for(c);
  const auto* compact = std::get_if<CompactIndex>(&idx);
  if (!compact) return o;
  for (QueryMode mode : {QueryMode::Nearest, QueryMode::Subset, QueryMode::Superset}) {
    const QueryResult a = compact->query(c.query, mode, Strategy::PerNode);
    const QueryResult b = compact->query(c.query, mode, Strategy::LeafOnly);
    if (a.ids != b.ids || a.hit_level != b.hit_level) {
      o.failure = std::string(to_string(mode)) + ": per-node found " +
                  std::to_string(a.ids.size()) + " sets at level " + std::to_string(a.hit_level) +
                  ", leaf-only " + std::to_string(b.ids.size()) + " at level " +
                  std::to_string(b.hit_level);
      return o;
    }
    if (mode == QueryMode::Nearest && c.query.size() < 10) {
      const double limit = 10.0 * std::pow(10.0, static_cast<double>(c.query.size()));
      for (const LevelStats& ls : a.levels) {
        const double ratio = static_cast<double>(ls.states) / limit;
        o.statistic = std::max(o.statistic.value_or(0.0), ratio);
        if (ratio >= 1.0) {
          o.failure = "level " + std::to_string(ls.level) + " explored " +
                      std::to_string(ls.states) + " states";
          return o;
        }
      }
    }
  }
  return o;
}

Outcome check_pairwise(const Counterexample& c) {
  const PointSet& p = c.database.at(0);
  const MatchingOptions opts{c.adjacency_steps};
  const ApproxResult a = approx_bottleneck(p, c.query, c.max_level, opts);
  const ApproxResult b = approx_bottleneck(c.query, p, c.max_level, opts);
  const double exact = exact_bottleneck(p, c.query);
  Outcome o;
  if (a.d_star != b.d_star) {
    o.failure = "asymmetric: d* " + std::to_string(a.d_star) + " vs " + std::to_string(b.d_star);
    return o;
  }
  if (exact > a.upper || (!a.at_resolution_floor && exact < a.lower)) {
    o.failure = "distance " + fmt(exact) + " outside [" + fmt(a.lower) + ", " + fmt(a.upper) +
                "] at d* = " + std::to_string(a.d_star);
    return o;
  }
  if (!a.at_resolution_floor) {
    const double ratio = a.estimate / exact;
    const double factor = std::max(ratio, 1.0 / ratio);
    o.statistic = factor;
    o.over_claim = factor > 2.0 * std::sqrt(2.0);
  }
  return o;
}

using CheckFn = Outcome (*)(const Counterexample&);

struct CheckEntry {
  CheckInfo info;
  CheckFn fn;
  std::function<Counterexample(Rng&, const ValidationConfig&)> make;
};

std::vector<CheckEntry> checks_for(IndexKind kind) {
  const std::size_t nmax = kind == IndexKind::Compact ? 6 : 5;
  const double sf = safe_factor(kind), pf = claimed_factor(kind);

  auto base = [](const ValidationConfig& cfg, const char* name) {
    Counterexample c;
    c.check = name;
    c.kind = cfg.kind;
    c.max_level = cfg.max_level;
    c.adjacency_steps = cfg.matching.adjacency_steps;
    return c;
  };

  std::vector<CheckEntry> out;
  out.push_back({{"oracle", "|exact - brute|", 0.0, 0.0}, &check_oracle,
                 [base](Rng& rng, const ValidationConfig& cfg) {
                   Counterexample c = base(cfg, "oracle");
                   const std::size_t n = rng.between(2, 8);
                   c.database.push_back(rng.point_set("P", n));
                   c.query = rng.below(2) ? rng.point_set("Q", n)
                                          : rng.perturb(c.database[0], rng.uniform(0.0, 0.2), "Q");
                   return c;
                 }});
  out.push_back({{"window", "distance / delta(d*)", pf, sf}, &check_window,
                 [base, nmax](Rng& rng, const ValidationConfig& cfg) {
                   Counterexample c = base(cfg, "window");
                   c.database.push_back(rng.point_set("P", rng.between(1, nmax)));
                   c.query = rng.perturb(c.database[0], rng.log_uniform(1e-4, 0.5), "Q");
                   return c;
                 }});
  out.push_back({{"approximation", "returned / optimum", 4.0 * pf, 4.0 * sf}, &check_approximation,
                 [base, nmax](Rng& rng, const ValidationConfig& cfg) {
                   Counterexample c = base(cfg, "approximation");
                   const std::size_t m = rng.between(2, 12);
                   for (std::size_t i = 0; i < m; ++i) {
                     c.database.push_back(
                         rng.point_set("s" + std::to_string(i), rng.between(1, nmax)));
                   }
                   c.query = rng.perturb(c.database[rng.below(m)], rng.log_uniform(1e-3, 0.2), "Q");
                   return c;
                 }});
  if (kind == IndexKind::Compact) {
    out.push_back({{"strategy", "states / 10^(n+1)", 1.0, 1.0}, &check_strategy,
                   [base](Rng& rng, const ValidationConfig& cfg) {
                     Counterexample c = base(cfg, "strategy");
                     const std::size_t m = rng.between(2, 12);
                     for (std::size_t i = 0; i < m; ++i) {
                       c.database.push_back(rng.point_set("s" + std::to_string(i), rng.between(1, 6)));
                     }
                     c.query = rng.perturb(c.database[rng.below(m)], rng.log_uniform(1e-3, 0.2), "Q");
                     return c;
                   }});
  }
  out.push_back({{"pairwise", "max(est/d, d/est)", 2.0 * std::sqrt(2.0), 4.0 * std::sqrt(2.0)},
                 &check_pairwise,
                 [base](Rng& rng, const ValidationConfig& cfg) {
                   Counterexample c = base(cfg, "pairwise");
                   c.database.push_back(rng.point_set("P", rng.between(1, 8)));
                   c.query = rng.perturb(c.database[0], rng.log_uniform(1e-4, 0.5), "Q");
                   return c;
                 }});
  return out;
}

Outcome dispatch(const Counterexample& c) {
  for (const CheckEntry& e : checks_for(c.kind)) {
    if (c.check == e.info.name) return e.fn(c);
  }
  throw std::invalid_argument("unknown check '" + c.check + "'");
}

void absorb(CheckRow& row, const Outcome& o) {
  ++row.trials;
  if (o.statistic) row.observed = std::max(row.observed, *o.statistic);
  if (o.over_claim) ++row.over_claim;
}

CheckRow row_for(const CheckInfo& info) {
  CheckRow row;
  row.name = info.name;
  row.statistic = info.statistic;
  row.claimed = info.claimed;
  row.safe_bound = info.safe_bound;
  return row;
}

}  // namespace

json Counterexample::to_json() const {
  json db = json::array();
  for (const PointSet& s : database) db.push_back(bneck::to_json(s));
  return json{{"check", check},
              {"index", std::string(to_string(kind))},
              {"max_level", max_level},
              {"adjacency_steps", adjacency_steps},
              {"database", std::move(db)},
              {"query", bneck::to_json(query)},
              {"message", message}};
}

Counterexample Counterexample::from_json(const json& j) {
  Counterexample c;
  c.check = j.at("check").get<std::string>();
  c.kind = parse_index_kind(j.at("index").get<std::string>());
  c.max_level = j.at("max_level").get<int>();
  c.adjacency_steps = j.at("adjacency_steps").get<int>();
  for (const json& s : j.at("database")) c.database.push_back(point_set_from_json(s));
  c.query = point_set_from_json(j.at("query"));
  c.message = j.value("message", "");
  return c;
}

ValidationReport run_validation(const ValidationConfig& cfg) {
  ValidationReport report;
  if (cfg.suite_size == 0) return report;
  Rng rng(cfg.seed);
  for (const CheckEntry& e : checks_for(cfg.kind)) {
    CheckRow row = row_for(e.info);
    for (std::size_t i = 0; i < cfg.suite_size; ++i) {
      Counterexample c = e.make(rng, cfg);
      const Outcome o = e.fn(c);
      absorb(row, o);
      if (o.failure) {
        c.message = *o.failure;
        report.rows.push_back(row);
        report.failure = std::move(c);
        return report;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

ValidationReport replay(const Counterexample& cx) {
  ValidationReport report;
  const Outcome o = dispatch(cx);
  for (const CheckEntry& e : checks_for(cx.kind)) {
    if (cx.check != e.info.name) continue;
    CheckRow row = row_for(e.info);
    absorb(row, o);
    report.rows.push_back(row);
  }
  if (o.failure) {
    Counterexample again = cx;
    again.message = *o.failure;
    report.failure = std::move(again);
  }
  return report;
}

void print_report(std::ostream& out, const ValidationReport& report) {
  out << std::left << std::setw(15) << "check" << std::right << std::setw(7) << "trials" << "  "
      << std::left << std::setw(22) << "statistic" << std::right << std::setw(11) << "observed"
      << std::setw(9) << "claimed" << std::setw(9) << "safe" << std::setw(12) << "over-claim"
      << '\n';
  for (const CheckRow& r : report.rows) {
    out << std::left << std::setw(15) << r.name << std::right << std::setw(7) << r.trials << "  "
        << std::left << std::setw(22) << r.statistic << std::right << std::setw(11)
        << std::setprecision(4) << r.observed << std::setw(9) << r.claimed << std::setw(9)
        << r.safe_bound << std::setw(12) << r.over_claim << '\n';
  }
  if (report.failure) {
    out << "FAILED " << report.failure->check << ": " << report.failure->message << '\n';
  }
}

}  // namespace bneck
