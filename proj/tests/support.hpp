#pragma once

#include "keydisc/keydisc.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace keydisc::testing {

inline const std::string kEx = "http://example.org/";

inline std::filesystem::path fixture_path(const std::string& name) { return std::filesystem::path(FIXTURE_DIR) / name; }

struct Fixture {
  std::vector<Triple> triples;
  ClassInstances instances;
};

inline Fixture load_fixture(const std::string& name, const std::string& class_local) {
  std::ifstream in(fixture_path(name));
  Fixture f;
  f.triples = parse_triples(in);
  f.instances = select_class_instances(std::span<const Triple>(f.triples), ClassSelection{kEx + class_local});
  return f;
}

inline ClassTable fixture_table(const std::string& name, const std::string& class_local,
                                const StorageBackend& backend = {}, ScoreMode mode = ScoreMode::exact) {
  auto f = load_fixture(name, class_local);
  return build_table(f.instances.triples, f.instances.subjects, backend, mode);
}

inline ClassTable nerve_table() { return fixture_table("nerve.nt", "Nerve"); }
inline ClassTable film_table() { return fixture_table("film.nt", "Film"); }

inline std::string ex(const std::string& local) { return kEx + local; }

// Random class data written straight as triples. Small value domains force
// collisions; nulls and second values exercise the set semantics.
struct RandomData {
  std::vector<Triple> triples;
  std::set<std::string> subjects;
};

// The type edge is one more property, so the default stays within 10.
struct RandomShape {
  std::size_t max_subjects = 200;
  std::size_t max_properties = 9;
  std::size_t min_properties = 1;
};

inline RandomData random_class(std::mt19937_64& rng, const RandomShape& shape = {}) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  RandomData d;
  const auto n_subjects = pick(1, shape.max_subjects);
  const auto n_props = pick(shape.min_properties, shape.max_properties);
  std::vector<std::size_t> domain(n_props);
  std::vector<double> null_rate(n_props);
  for (std::size_t p = 0; p < n_props; ++p) {
    domain[p] = pick(1, std::max<std::size_t>(2, n_subjects));
    null_rate[p] = coin(0.5) ? 0.0 : 0.3;
  }
  for (std::size_t s = 0; s < n_subjects; ++s) {
    auto subject = ex("s" + std::to_string(s));
    d.subjects.insert(subject);
    d.triples.push_back({subject, std::string(kRdfType), Term::iri_term(ex("T"))});
    for (std::size_t p = 0; p < n_props; ++p) {
      if (coin(null_rate[p])) continue;
      auto prop = ex("p" + std::to_string(p));
      d.triples.push_back({subject, prop, Term::literal_term("v" + std::to_string(pick(0, domain[p] - 1)))});
      if (coin(0.1)) d.triples.push_back({subject, prop, Term::literal_term("v" + std::to_string(pick(0, domain[p] - 1)))});
    }
  }
  return d;
}

inline std::set<std::vector<std::string>> label_sets(const SearchReport& r) {
  std::set<std::vector<std::string>> out;
  for (const auto& k : r.keys) {
    auto labels = k.properties;
    std::sort(labels.begin(), labels.end());
    out.insert(labels);
  }
  return out;
}

}  // namespace keydisc::testing
