#pragma once

// Report serialisation.
//
// JSON layout (format "keydisc-report/1"):
//   manifest    the resolved run configuration
//   result      subjects, universe sizes, keys [{size, properties, score,
//               score_decimal, distinguishable}], vnodes, reduction ratio,
//               termination flags, peak_memory_bytes
//   timings_ms  wall-clock timings; the only non-deterministic section
//
// TSV layout: "size\tproperties\tscore" rows sorted by size ascending, score
// descending, then property list.

#include "keydisc/class_table.hpp"
#include "keydisc/rational.hpp"
#include "keydisc/search.hpp"
#include "keydisc/selection.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace keydisc {

inline constexpr std::string_view kReportFormat = "keydisc-report/1";

struct RunManifest {
  std::string input;
  std::string class_iri;
  std::string type_predicate{kRdfType};
  SearchConfig config;
  BackendKind backend = BackendKind::memory;
  std::string index_path;
  ScoreMode score_mode = ScoreMode::exact;
  bool lenient = false;
  std::string report_path;
  std::string format = "json";
};

struct RunTimings {
  double ingest_ms = 0;
  double index_ms = 0;
};

inline std::string format_score(const Rational& r) { return to_decimal(r, 5); }

inline std::string property_list(const std::vector<std::string>& props) {
  std::string out = "[";
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (i) out += ", ";
    out += props[i];
  }
  return out + "]";
}

inline std::vector<const DiscoveredSet*> sorted_keys(const SearchReport& report) {
  std::vector<const DiscoveredSet*> keys;
  for (const auto& k : report.keys) keys.push_back(&k);
  std::sort(keys.begin(), keys.end(), [](const DiscoveredSet* a, const DiscoveredSet* b) {
    if (a->properties.size() != b->properties.size()) return a->properties.size() < b->properties.size();
    auto sa = a->score.score();
    auto sb = b->score.score();
    if (sa != sb) return sa > sb;
    return a->properties < b->properties;
  });
  return keys;
}

inline nlohmann::json manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["input"] = m.input;
  j["class"] = m.class_iri;
  j["type_predicate"] = m.type_predicate;
  j["alpha"] = to_fraction_string(m.config.alpha);
  j["tau"] = to_fraction_string(m.config.tau);
  j["fast"] = m.config.fast;
  j["mode"] = std::string(to_string(m.config.mode));
  j["max_nodes"] = m.config.max_nodes ? nlohmann::json(*m.config.max_nodes) : nlohmann::json(nullptr);
  j["time_budget_ms"] =
      m.config.time_budget ? nlohmann::json(m.config.time_budget->count()) : nlohmann::json(nullptr);
  j["threads"] = m.config.threads;
  j["backend"] = std::string(to_string(m.backend));
  j["index"] = m.index_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.index_path);
  j["score_mode"] = std::string(to_string(m.score_mode));
  j["lenient"] = m.lenient;
  j["report"] = m.report_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.report_path);
  j["format"] = m.format;
  return j;
}

inline nlohmann::json result_json(const SearchReport& r) {
  nlohmann::json keys = nlohmann::json::array();
  for (const auto* k : sorted_keys(r)) {
    keys.push_back({{"size", k->properties.size()},
                    {"properties", k->properties},
                    {"score", to_fraction_string(k->score.score())},
                    {"score_decimal", format_score(k->score.score())},
                    {"distinguishable", k->score.distinguishable}});
  }
  nlohmann::json j;
  j["subjects"] = r.subjects;
  j["universe_size"] = r.universe_size;
  j["searched_universe_size"] = r.searched_universe_size;
  j["keys"] = std::move(keys);
  j["vnodes"] = r.vnodes;
  j["reduction_ratio"] = r.reduction_ratio ? nlohmann::json(to_fraction_string(*r.reduction_ratio)) : nlohmann::json(nullptr);
  j["reduction_percent"] = r.reduction_percent;
  j["no_key_exists"] = r.no_key_exists;
  j["terminated_early"] = r.terminated_early;
  j["termination_reason"] = r.termination_reason;
  j["revisits"] = r.revisits;
  j["peak_queue"] = r.peak_queue;
  j["peak_memory_bytes"] = r.peak_memory_bytes;
  return j;
}

inline nlohmann::json report_json(const RunManifest& m, const SearchReport& r, const RunTimings& t) {
  nlohmann::json j;
  j["format"] = std::string(kReportFormat);
  j["manifest"] = manifest_json(m);
  j["result"] = result_json(r);
  j["timings_ms"] = {{"ingest", t.ingest_ms},
                     {"index", t.index_ms},
                     {"ordering", r.timings.ordering_ms},
                     {"search", r.timings.search_ms}};
  return j;
}

inline std::string keys_tsv(const SearchReport& r) {
  std::ostringstream out;
  out << "size\tproperties\tscore\n";
  for (const auto* k : sorted_keys(r))
    out << k->properties.size() << '\t' << property_list(k->properties) << '\t' << format_score(k->score.score())
        << '\n';
  return out.str();
}

inline void print_summary(std::ostream& out, const RunManifest& m, const SearchReport& r, const RunTimings& t) {
  out << "class " << m.class_iri << ": " << r.subjects << " subjects, " << r.universe_size << " properties";
  if (r.searched_universe_size != r.universe_size) out << " (" << r.searched_universe_size << " searched)";
  out << "\n";
  out << "alpha " << to_fraction_string(m.config.alpha) << ", " << (m.config.fast ? "fast" : "complete") << " search, "
      << to_string(m.config.mode) << " mode\n";
  if (r.no_key_exists) out << "no key exists: the full property set scores below alpha\n";
  if (r.terminated_early) out << "terminated early: " << r.termination_reason << "\n";
  out << "Size\tProperties\tScore\n";
  for (const auto* k : sorted_keys(r))
    out << k->properties.size() << '\t' << property_list(k->properties) << '\t' << format_score(k->score.score())
        << '\n';
  out << r.keys.size() << " key(s), vnodes " << r.vnodes << ", RR " << r.reduction_percent << "%\n";
  out << "timings ms: ingest " << t.ingest_ms << ", index " << t.index_ms << ", ordering " << r.timings.ordering_ms
      << ", search " << r.timings.search_ms << "\n";
}

}  // namespace keydisc
