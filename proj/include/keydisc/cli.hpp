#pragma once

// Command-line front end: discover, oracle, gen, stats.
//
// Exit codes: 0 success (including "no instances"), 1 usage or runtime
// error, 2 input file missing, 3 parse error in strict mode.
// KEYDISC_INDEX_DIR sets the default directory for disk indexes.

#include "keydisc/datagen.hpp"
#include "keydisc/ntriples.hpp"
#include "keydisc/oracle.hpp"
#include "keydisc/rational.hpp"
#include "keydisc/report.hpp"
#include "keydisc/scoring.hpp"
#include "keydisc/search.hpp"
#include "keydisc/selection.hpp"
#include "keydisc/table_builder.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace keydisc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMissingInput = 2;
inline constexpr int kExitParseError = 3;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct Loaded {
  ClassInstances instances;
  ParseStats stats;
  double ingest_ms = 0;
};

inline Loaded load_class(const std::string& path, const ClassSelection& sel, bool lenient) {
  if (!std::filesystem::exists(path)) throw CliError(kExitMissingInput, "input file not found: " + path);
  std::ifstream in(path);
  if (!in) throw CliError(kExitMissingInput, "cannot open input file: " + path);
  auto t0 = std::chrono::steady_clock::now();
  Loaded out;
  try {
    auto triples = parse_triples(in, lenient ? ParseMode::lenient : ParseMode::strict, &out.stats);
    out.instances = select_class_instances(std::move(triples), sel);
  } catch (const ParseError& e) {
    throw CliError(kExitParseError, path + ": " + e.what());
  }
  out.ingest_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline std::string default_index_path(const std::string& input, const std::string& class_iri) {
  std::filesystem::path dir;
  if (const char* env = std::getenv("KEYDISC_INDEX_DIR"); env && *env) dir = env;
  else dir = std::filesystem::temp_directory_path();
  auto tag = digest128(std::filesystem::absolute(input).string() + '\n' + class_iri).hex().substr(0, 16);
  return (dir / ("keydisc-" + tag + ".kdx")).string();
}

inline Rational parse_fraction_flag(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw CliError(kExitError, std::string("invalid ") + flag + ": " + e.what());
  }
}

inline void warn_skipped(const ParseStats& stats, std::ostream& err) {
  if (stats.skipped == 0) return;
  err << "warning: skipped " << stats.skipped << " malformed line(s)\n";
  for (const auto& w : stats.warnings) err << "  " << w << "\n";
}

struct DiscoverOptions {
  std::string input;
  std::string class_iri;
  std::string type_predicate{kRdfType};
  std::string alpha = "1";
  std::string tau = "0.001";
  bool fast = false;
  std::string mode = "all";
  std::string backend = "memory";
  std::string index;
  std::string score_mode = "exact";
  std::string report;
  std::string format = "json";
  bool lenient = false;
  unsigned threads = 1;
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::int64_t> time_budget_ms;
};

struct DiscoverOutcome {
  RunManifest manifest;
  SearchReport report;
  RunTimings timings;
};

inline DiscoverOutcome discover(const DiscoverOptions& o, std::ostream& err) {
  DiscoverOutcome d;
  auto& m = d.manifest;
  m.input = o.input;
  m.class_iri = o.class_iri;
  m.type_predicate = o.type_predicate;
  m.config.alpha = parse_fraction_flag(o.alpha, "--alpha");
  m.config.tau = parse_fraction_flag(o.tau, "--tau");
  m.config.fast = o.fast;
  m.config.mode = o.mode == "first" ? SearchMode::first_key : SearchMode::all_keys;
  m.config.threads = o.threads;
  m.config.max_nodes = o.max_nodes;
  if (o.time_budget_ms) m.config.time_budget = std::chrono::milliseconds(*o.time_budget_ms);
  try {
    m.config.validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitError, e.what());
  }
  m.backend = o.backend == "disk" ? BackendKind::disk : BackendKind::memory;
  m.score_mode = o.score_mode == "hashed" ? ScoreMode::hashed : ScoreMode::exact;
  m.lenient = o.lenient;
  m.report_path = o.report;
  m.format = o.format;
  if (m.backend == BackendKind::disk) m.index_path = o.index.empty() ? default_index_path(o.input, o.class_iri) : o.index;

  auto loaded = load_class(o.input, ClassSelection{o.class_iri, o.type_predicate}, o.lenient);
  warn_skipped(loaded.stats, err);
  d.timings.ingest_ms = loaded.ingest_ms;
  if (loaded.instances.subjects.empty()) err << "warning: no instances of " << o.class_iri << " in " << o.input << "\n";

  auto t0 = std::chrono::steady_clock::now();
  StorageBackend backend{m.backend, m.index_path};
  auto table = build_table(loaded.instances.triples, loaded.instances.subjects, backend, m.score_mode);
  loaded.instances = {};
  d.timings.index_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (table.subject_count() == 0) {
    d.report.no_key_exists = true;
    d.report.termination_reason = "no instances of the class";
    return d;
  }
  d.report = find_keys(table, m.config);
  return d;
}

inline void write_report_file(const DiscoverOutcome& d) {
  const auto& m = d.manifest;
  if (m.report_path.empty()) return;
  std::ofstream out(m.report_path);
  if (!out) throw CliError(kExitError, "cannot write report: " + m.report_path);
  if (m.format == "tsv") out << keys_tsv(d.report);
  else out << report_json(m, d.report, d.timings).dump(2) << "\n";
}

struct OracleOptions {
  std::string input;
  std::string class_iri;
  std::string type_predicate{kRdfType};
  std::string alpha = "1";
  std::string report;
  bool lenient = false;
};

inline nlohmann::json oracle_json(const oracle::Result& r, const Rational& alpha) {
  nlohmann::json j;
  j["alpha"] = to_fraction_string(alpha);
  j["subjects"] = r.subjects;
  j["properties"] = r.properties;
  nlohmann::json minimal = nlohmann::json::array();
  for (const auto& labels : r.minimal_label_sets()) {
    auto score = r.score(labels);
    minimal.push_back({{"size", labels.size()}, {"properties", labels}, {"score", to_fraction_string(score)}});
  }
  j["minimal"] = std::move(minimal);
  nlohmann::json scores = nlohmann::json::array();
  for (oracle::Mask mask = 1; mask < r.distinguishable.size(); ++mask)
    scores.push_back({{"properties", r.labels(mask)}, {"score", to_fraction_string(r.score(mask))}});
  j["scores"] = std::move(scores);
  j["monotonicity_violations"] = r.monotonicity_violations;
  return j;
}

inline int run_oracle(const OracleOptions& o, std::ostream& out, std::ostream& err) {
  auto alpha = parse_fraction_flag(o.alpha, "--alpha");
  auto loaded = load_class(o.input, ClassSelection{o.class_iri, o.type_predicate}, o.lenient);
  warn_skipped(loaded.stats, err);
  auto data = oracle::Dataset::from_triples(loaded.instances.triples, loaded.instances.subjects);
  oracle::Result r;
  try {
    r = oracle::brute_force(data, alpha);
  } catch (const std::length_error& e) {
    throw CliError(kExitError, e.what());
  }
  out << "Size\tProperties\tScore\n";
  for (const auto& labels : r.minimal_label_sets())
    out << labels.size() << '\t' << property_list(labels) << '\t' << format_score(r.score(labels)) << '\n';
  out << r.minimal.size() << " minimal set(s) over " << r.properties.size() << " properties, " << r.subjects
      << " subjects\n";
  if (!o.report.empty()) {
    std::ofstream f(o.report);
    if (!f) throw CliError(kExitError, "cannot write report: " + o.report);
    f << oracle_json(r, alpha).dump(2) << "\n";
  }
  return kExitOk;
}

struct StatsRow {
  std::string property;
  std::size_t covered = 0;
  ScoreResult singleton;
};

inline std::vector<StatsRow> table_stats(const ClassTable& table) {
  std::vector<StatsRow> rows;
  for (std::size_t p = 0; p < table.property_count(); ++p) {
    std::size_t one[] = {p};
    rows.push_back({table.properties()[p], table.covered(p), compute_score(table, one)});
  }
  std::sort(rows.begin(), rows.end(), [](const StatsRow& a, const StatsRow& b) { return a.property < b.property; });
  return rows;
}

inline int run_stats(const std::string& input, const ClassSelection& sel, bool lenient, const std::string& format,
                     std::ostream& out, std::ostream& err) {
  auto loaded = load_class(input, sel, lenient);
  warn_skipped(loaded.stats, err);
  auto table = build_table(loaded.instances.triples, loaded.instances.subjects);
  auto rows = table_stats(table);
  const auto n = static_cast<std::int64_t>(table.subject_count());
  auto coverage = [&](const StatsRow& r) {
    return n == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(r.covered), n);
  };
  if (format == "json") {
    nlohmann::json j;
    j["subjects"] = table.subject_count();
    j["properties"] = nlohmann::json::array();
    for (const auto& r : rows)
      j["properties"].push_back({{"property", r.property},
                                 {"coverage", to_fraction_string(coverage(r))},
                                 {"coverage_decimal", format_score(coverage(r))},
                                 {"score", to_fraction_string(r.singleton.score())},
                                 {"score_decimal", format_score(r.singleton.score())}});
    out << j.dump(2) << "\n";
  } else {
    out << "subjects\t" << table.subject_count() << "\n";
    out << "property\tcoverage\tscore\n";
    for (const auto& r : rows)
      out << r.property << '\t' << format_score(coverage(r)) << '\t' << format_score(r.singleton.score()) << '\n';
  }
  return kExitOk;
}

inline std::vector<std::size_t> parse_planted(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item.front() == 'p') item.erase(0, 1);
    try {
      out.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw CliError(kExitError, "invalid --plant entry '" + item + "'");
    }
  }
  return out;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Minimal key and almost-key discovery for RDF classes"};
  app.require_subcommand(1);

  DiscoverOptions dopt;
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::int64_t> budget;
  auto* discover_cmd = app.add_subcommand("discover", "find minimal keys / almost-keys of a class");
  discover_cmd->add_option("--input", dopt.input, "N-Triples file")->required();
  discover_cmd->add_option("--class", dopt.class_iri, "class IRI")->required();
  discover_cmd->add_option("--type-predicate", dopt.type_predicate, "membership predicate IRI");
  discover_cmd->add_option("--alpha", dopt.alpha, "score threshold, decimal or n/d (1 = exact keys)");
  discover_cmd->add_option("--k", "exception budget; overrides --alpha with (|S|-k)/|S|")->type_name("UINT");
  discover_cmd->add_option("--tau", dopt.tau, "fast-search singleton score floor");
  discover_cmd->add_flag("--fast", dopt.fast, "prune branches touching found keys (not exhaustive)");
  discover_cmd->add_option("--mode", dopt.mode, "all | first")->check(CLI::IsMember({"all", "first"}));
  discover_cmd->add_option("--backend", dopt.backend, "memory | disk")->check(CLI::IsMember({"memory", "disk"}));
  discover_cmd->add_option("--index", dopt.index, "disk index path");
  discover_cmd->add_option("--score-mode", dopt.score_mode, "exact | hashed")->check(CLI::IsMember({"exact", "hashed"}));
  discover_cmd->add_option("--report", dopt.report, "report output path");
  discover_cmd->add_option("--format", dopt.format, "json | tsv")->check(CLI::IsMember({"json", "tsv"}));
  discover_cmd->add_flag("--lenient", dopt.lenient, "skip malformed lines instead of failing");
  discover_cmd->add_option("--threads", dopt.threads, "scoring threads")->check(CLI::PositiveNumber);
  discover_cmd->add_option("--max-nodes", max_nodes, "stop after this many scored sets");
  discover_cmd->add_option("--time-budget-ms", budget, "stop after this much wall-clock time");

  OracleOptions oopt;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force all subsets (up to 20 properties)");
  oracle_cmd->add_option("--input", oopt.input, "N-Triples file")->required();
  oracle_cmd->add_option("--class", oopt.class_iri, "class IRI")->required();
  oracle_cmd->add_option("--type-predicate", oopt.type_predicate, "membership predicate IRI");
  oracle_cmd->add_option("--alpha", oopt.alpha, "score threshold");
  oracle_cmd->add_option("--report", oopt.report, "JSON output with the full score map");
  oracle_cmd->add_flag("--lenient", oopt.lenient, "skip malformed lines");

  GenSpec gspec;
  std::string planted;
  std::string gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic N-Triples dataset");
  gen_cmd->add_option("--seed", gspec.seed, "random seed");
  gen_cmd->add_option("--subjects", gspec.subjects, "number of instances");
  gen_cmd->add_option("--properties", gspec.properties, "number of properties");
  gen_cmd->add_option("--null-rate", gspec.null_rate, "probability a cell is empty");
  gen_cmd->add_option("--dup-rate", gspec.duplicate_rate, "probability a value comes from the shared pool");
  gen_cmd->add_option("--multi-rate", gspec.multi_value_rate, "probability of a second value");
  gen_cmd->add_option("--pool", gspec.duplicate_pool, "shared pool size");
  gen_cmd->add_option("--plant", planted, "planted key, e.g. 1,2,3");
  gen_cmd->add_option("--class", gspec.class_iri, "class IRI");
  gen_cmd->add_option("--output", gen_output, "output file (default stdout)");

  std::string stats_input, stats_class, stats_type{kRdfType}, stats_format = "tsv";
  bool stats_lenient = false;
  auto* stats_cmd = app.add_subcommand("stats", "per-property coverage and singleton score");
  stats_cmd->add_option("--input", stats_input, "N-Triples file")->required();
  stats_cmd->add_option("--class", stats_class, "class IRI")->required();
  stats_cmd->add_option("--type-predicate", stats_type, "membership predicate IRI");
  stats_cmd->add_option("--format", stats_format, "tsv | json")->check(CLI::IsMember({"tsv", "json"}));
  stats_cmd->add_flag("--lenient", stats_lenient, "skip malformed lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*discover_cmd) {
      dopt.max_nodes = max_nodes;
      dopt.time_budget_ms = budget;
      if (auto* k_opt = discover_cmd->get_option("--k"); k_opt->count() > 0) {
        // Resolved against |S| once the class is loaded.
        auto k = k_opt->as<std::size_t>();
        auto loaded = load_class(dopt.input, ClassSelection{dopt.class_iri, dopt.type_predicate}, dopt.lenient);
        auto n = loaded.instances.subjects.size();
        if (n == 0) throw CliError(kExitOk, "no instances of " + dopt.class_iri);
        try {
          dopt.alpha = to_fraction_string(alpha_for_k(k, n));
        } catch (const std::invalid_argument& e) {
          throw CliError(kExitError, e.what());
        }
      }
      auto outcome = discover(dopt, err);
      print_summary(out, outcome.manifest, outcome.report, outcome.timings);
      write_report_file(outcome);
      return kExitOk;
    }
    if (*oracle_cmd) return run_oracle(oopt, out, err);
    if (*gen_cmd) {
      gspec.planted_key = parse_planted(planted);
      GenStats stats;
      try {
        if (gen_output.empty()) {
          stats = generate(gspec, out);
        } else {
          std::ofstream f(gen_output);
          if (!f) throw CliError(kExitError, "cannot write " + gen_output);
          stats = generate(gspec, f);
        }
      } catch (const std::invalid_argument& e) {
        throw CliError(kExitError, e.what());
      }
      err << "generated " << stats.triples << " triples\n";
      return kExitOk;
    }
    if (*stats_cmd) return run_stats(stats_input, ClassSelection{stats_class, stats_type}, stats_lenient, stats_format, out, err);
  } catch (const CliError& e) {
    err << (e.code() == kExitOk ? "warning: " : "error: ") << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace keydisc::cli
