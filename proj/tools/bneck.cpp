// bneck: build and query bottleneck-distance indexes of planar point sets.
//
// Exit codes: 0 ok, 1 usage, 2 invalid input, 3 validation counterexample.

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "bneck/harness.hpp"
#include "bneck/pairwise.hpp"
#include "bneck/validate.hpp"

namespace {

using namespace bneck;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitCounterexample = 3;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct IndexArgs {
  std::string kind = "compact";
  int dmax = kDefaultMaxLevel;
  std::uint64_t budget = 1'000'000;
};

void add_index_flags(CLI::App* cmd, IndexArgs& a) {
  cmd->add_option("--index", a.kind, "Index kind")
      ->check(CLI::IsMember({"compact", "multisnap"}))
      ->capture_default_str();
  cmd->add_option("--dmax", a.dmax, "Deepest grid level")
      ->check(CLI::Range(1, kMaxSupportedLevel))
      ->capture_default_str();
  cmd->add_option("--budget", a.budget, "Multisnap limit on 4^|P| * dmax")->capture_default_str();
}

BuildOptions build_options(const IndexArgs& a) {
  BuildOptions o;
  o.kind = parse_index_kind(a.kind);
  o.max_level = a.dmax;
  o.multisnap_budget = a.budget;
  return o;
}

// An index file is loaded as is; anything else is read as a dataset and built.
AnyIndex open_index(const std::string& path, const IndexArgs& a) {
  if (is_index_file(path)) {
    std::ifstream in(path, std::ios::binary);
    return load_index(in);
  }
  const auto sets = read_dataset_file(path);
  return build_index(sets, build_options(a));
}

PointSet pick(const std::string& path, const std::string& id) {
  const auto sets = read_dataset_file(path);
  if (sets.empty()) throw DatasetError(path + " contains no point sets");
  if (id.empty()) return sets.front();
  for (const auto& s : sets) {
    if (s.id == id) return s;
  }
  throw DatasetError("no point set '" + id + "' in " + path);
}

void print_stats(std::ostream& out, const AnyIndex& idx) {
  out << "index      " << to_string(kind_of(idx)) << '\n'
      << "dmax       " << max_level_of(idx) << '\n'
      << "sets       " << registry_of(idx).size() << '\n'
      << "nodes      " << total_nodes(tries_of(idx)) << '\n';
  for (const auto& [k, trie] : tries_of(idx)) {
    out << "  |P|=" << k << "  nodes " << trie.node_count() << "  leaves " << trie.leaf_count()
        << '\n';
  }
}

int cmd_build(const std::string& dataset, const IndexArgs& a, const std::string& output) {
  const auto t0 = Clock::now();
  const auto sets = read_dataset_file(dataset);
  const AnyIndex idx = build_index(sets, build_options(a));
  const double elapsed = ms_since(t0);
  print_stats(std::cout, idx);
  std::cout << "build_ms   " << std::fixed << std::setprecision(2) << elapsed << '\n';
  if (!output.empty()) {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw DatasetError("cannot write " + output);
    save_index(out, idx);
    std::cout << "written    " << output << '\n';
  }
  return kExitOk;
}

struct QueryArgs {
  std::string index_path;
  std::string query_path;
  std::string mode = "nearest";
  std::string strategy = "auto";
  bool rescore = false;
  bool no_timings = false;
  unsigned jobs = 1;
};

int cmd_query(const QueryArgs& q, const IndexArgs& a) {
  const AnyIndex idx = open_index(q.index_path, a);
  const auto queries = read_dataset_file(q.query_path);
  const QueryMode mode = parse_query_mode(q.mode);
  const Strategy strategy = parse_strategy(q.strategy);
  if (kind_of(idx) == IndexKind::MultiSnap && mode != QueryMode::Nearest) {
    throw std::invalid_argument("multisnap index supports --mode nearest only");
  }
  const ReportOptions opts{q.rescore, !q.no_timings};

  std::vector<std::string> lines(queries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < queries.size(); i = next++) {
      const auto t0 = Clock::now();
      const QueryResult r = run_query(idx, queries[i], mode, strategy);
      const double elapsed = ms_since(t0);
      lines[i] = make_report(queries[i], mode, r, registry_of(idx), opts, elapsed).dump();
    }
  };
  const unsigned jobs = std::max(1u, q.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& line : lines) std::cout << line << '\n';
  return kExitOk;
}

int cmd_dist(const std::string& fa, const std::string& fb, const std::string& ida,
             const std::string& idb) {
  const PointSet p = pick(fa, ida), q = pick(fb, idb);
  std::cout << std::setprecision(17) << exact_bottleneck(p, q) << '\n';
  return kExitOk;
}

int cmd_dist_approx(const std::string& fa, const std::string& fb, const std::string& ida,
                    const std::string& idb, int dmax, bool oracle) {
  const PointSet p = pick(fa, ida), q = pick(fb, idb);
  const ApproxResult r = approx_bottleneck(p, q, dmax);
  std::cout << std::setprecision(10) << "estimate   " << r.estimate << '\n'
            << "window     [" << r.lower << ", " << r.upper << "]\n"
            << "d_star     " << r.d_star << (r.at_resolution_floor ? " (resolution floor)" : "")
            << '\n';
  if (r.gap_level) std::cout << "gap        matches again at level " << *r.gap_level << '\n';
  if (oracle) {
    const double exact = exact_bottleneck(p, q);
    std::cout << "exact      " << exact << '\n';
    if (exact > 0.0) std::cout << "ratio      " << r.estimate / exact << '\n';
  }
  return kExitOk;
}

int cmd_gen(const GenConfig& cfg, const std::string& db_path, const std::string& q_path) {
  const Generated g = generate(cfg);
  std::ofstream db(db_path);
  if (!db) throw DatasetError("cannot write " + db_path);
  write_dataset(db, g.database);
  if (!q_path.empty()) {
    std::ofstream qs(q_path);
    if (!qs) throw DatasetError("cannot write " + q_path);
    write_dataset(qs, g.queries, g.sources);
  }
  std::cout << "wrote " << g.database.size() << " sets";
  if (!q_path.empty()) std::cout << " and " << g.queries.size() << " queries";
  std::cout << '\n';
  return kExitOk;
}

int finish_validation(const ValidationReport& report, const std::string& dump_path) {
  print_report(std::cout, report);
  if (report.ok()) return kExitOk;
  std::ofstream out(dump_path);
  out << report.failure->to_json().dump(2) << '\n';
  std::cout << "counterexample written to " << dump_path << '\n';
  return kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate nearest bottleneck-distance search over planar point sets"};
  app.require_subcommand(1);

  IndexArgs index_args;

  std::string build_dataset, build_out;
  auto* build = app.add_subcommand("build", "Build an index from a dataset");
  build->add_option("dataset", build_dataset, "JSON-lines dataset")->required();
  build->add_option("-o,--output", build_out, "Write the index here");
  add_index_flags(build, index_args);

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "Query an index (or a dataset built on the fly)");
  query->add_option("source", qa.index_path, "Index file or dataset")->required();
  query->add_option("queries", qa.query_path, "JSON-lines query sets")->required();
  query->add_option("--mode", qa.mode, "nearest, subset or superset")
      ->check(CLI::IsMember({"nearest", "subset", "superset"}))
      ->capture_default_str();
  query->add_option("--strategy", qa.strategy, "per-node, leaf-only or auto")
      ->check(CLI::IsMember({"per-node", "leaf-only", "auto"}))
      ->capture_default_str();
  query->add_flag("--rescore", qa.rescore, "Attach exact distances and sort by them");
  query->add_flag("--no-timings", qa.no_timings, "Omit wall times from reports");
  query->add_option("--jobs", qa.jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_index_flags(query, index_args);

  std::string fa, fb, ida, idb;
  bool oracle = false;
  auto* dist = app.add_subcommand("dist", "Exact bottleneck distance of two sets");
  auto* approx = app.add_subcommand("dist-approx", "Grid-level estimate of the bottleneck distance");
  for (auto* cmd : {dist, approx}) {
    cmd->add_option("a", fa, "File holding the first set")->required();
    cmd->add_option("b", fb, "File holding the second set")->required();
    cmd->add_option("--id-a", ida, "Record id in the first file (default: first record)");
    cmd->add_option("--id-b", idb, "Record id in the second file (default: first record)");
  }
  approx->add_option("--dmax", index_args.dmax, "Deepest grid level")
      ->check(CLI::Range(1, kMaxSupportedLevel))
      ->capture_default_str();
  approx->add_flag("--oracle", oracle, "Also print the exact distance and the ratio");

  GenConfig gen_cfg;
  std::string gen_db, gen_q;
  auto* gen = app.add_subcommand("gen", "Generate a random dataset and perturbed queries");
  gen->add_option("--sets", gen_cfg.sets, "Number of stored sets")->capture_default_str();
  gen->add_option("--min-size", gen_cfg.min_size)->capture_default_str();
  gen->add_option("--max-size", gen_cfg.max_size)->capture_default_str();
  gen->add_option("--queries", gen_cfg.queries, "Number of queries (0: one per set)");
  gen->add_option("--seed", gen_cfg.seed)->capture_default_str();
  gen->add_option("--eps", gen_cfg.eps, "Per-coordinate perturbation bound")->capture_default_str();
  gen->add_option("--out", gen_db, "Dataset output")->required();
  gen->add_option("--queries-out", gen_q, "Query output");

  ValidationConfig val_cfg;
  std::string val_kind = "compact", val_fault, val_replay, val_dump = "counterexample.json";
  auto* validate = app.add_subcommand("validate", "Run the randomized property suites");
  validate->add_option("--index", val_kind)
      ->check(CLI::IsMember({"compact", "multisnap"}))
      ->capture_default_str();
  validate->add_option("--suite", val_cfg.suite_size, "Instances per check")->capture_default_str();
  validate->add_option("--seed", val_cfg.seed)->capture_default_str();
  validate->add_option("--dmax", val_cfg.max_level)
      ->check(CLI::Range(1, kMaxSupportedLevel))
      ->capture_default_str();
  validate->add_option("--fault", val_fault, "Inject a known defect")
      ->check(CLI::IsMember({"adjacency-halved"}));
  validate->add_option("--replay", val_replay, "Rerun a counterexample dump");
  validate->add_option("--dump", val_dump, "Where to write a counterexample")->capture_default_str();

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "Describe an index");
  stats->add_option("source", stats_path, "Index file or dataset")->required();
  add_index_flags(stats, index_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build(build_dataset, index_args, build_out);
    if (*query) return cmd_query(qa, index_args);
    if (*dist) return cmd_dist(fa, fb, ida, idb);
    if (*approx) return cmd_dist_approx(fa, fb, ida, idb, index_args.dmax, oracle);
    if (*gen) return cmd_gen(gen_cfg, gen_db, gen_q);
    if (*validate) {
      if (!val_replay.empty()) {
        std::ifstream in(val_replay);
        if (!in) throw DatasetError("cannot open " + val_replay);
        return finish_validation(replay(Counterexample::from_json(nlohmann::json::parse(in))),
                                 val_dump);
      }
      val_cfg.kind = parse_index_kind(val_kind);
      if (val_fault == "adjacency-halved") val_cfg.matching.adjacency_steps = 0;
      return finish_validation(run_validation(val_cfg), val_dump);
    }
    if (*stats) {
      print_stats(std::cout, open_index(stats_path, index_args));
      return kExitOk;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "error[budget_exceeded]: " << e.what() << '\n';
    return kExitInput;
  } catch (const DatasetError& e) {
    std::cerr << "error[invalid_input]: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error[invalid_input]: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error[invalid_input]: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}
