#pragma once

// Synthetic N-Triples generator for benchmarks and randomized tests.
//
// Random source: std::mt19937_64 seeded with `seed` (its output sequence is
// fixed by the C++ standard). Uniform reals are (x >> 11) * 2^-53 and bounded
// integers x % n, so output is identical on every platform.
//
// Cell rules for subject i and non-planted property j, drawn in that order:
//   null with probability null_rate (no triple);
//   otherwise a pooled value "d<r>", r < duplicate_pool, with probability
//   duplicate_rate, else the subject-unique value "v<i>";
//   with probability multi_value_rate one more value drawn the same way.
// Planted properties carry the mixed-radix digits of i, never null and
// single-valued, so together they identify every subject.

#include "keydisc/ntriples.hpp"
#include "keydisc/selection.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace keydisc {

struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t subjects = 100;
  std::size_t properties = 5;
  double null_rate = 0.0;
  double duplicate_rate = 0.0;
  double multi_value_rate = 0.0;
  std::vector<std::size_t> planted_key;  // 1-based property numbers
  std::size_t duplicate_pool = 4;
  std::string class_iri = "http://example.org/gen/Thing";
  std::string base = "http://example.org/gen/";

  void validate() const {
    auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (!rate_ok(null_rate) || !rate_ok(duplicate_rate) || !rate_ok(multi_value_rate))
      throw std::invalid_argument("generator rates must lie in [0, 1]");
    if (subjects < 1 || properties < 1) throw std::invalid_argument("generator needs at least one subject and property");
    if (duplicate_pool < 1) throw std::invalid_argument("duplicate pool must be non-empty");
    std::set<std::size_t> seen;
    for (auto p : planted_key) {
      if (p < 1 || p > properties)
        throw std::invalid_argument("planted key property p" + std::to_string(p) + " is outside 1.." +
                                    std::to_string(properties));
      if (!seen.insert(p).second) throw std::invalid_argument("planted key lists p" + std::to_string(p) + " twice");
    }
    if (!planted_key.empty() && duplicate_rate >= 1.0)
      throw std::invalid_argument("a planted key contradicts a duplicate rate of 1");
  }

  std::string property_iri(std::size_t one_based) const { return base + "p" + std::to_string(one_based); }
  std::string subject_iri(std::size_t i) const { return base + "s" + std::to_string(i); }
};

struct GenStats {
  std::size_t triples = 0;
  std::size_t cells = 0;         // non-empty (subject, property) cells
  std::size_t extra_values = 0;  // second values of multi-valued cells
};

namespace detail {

class PortableRandom {
 public:
  explicit PortableRandom(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

inline std::size_t planted_radix(std::size_t subjects, std::size_t digits) {
  if (subjects <= 1 || digits == 0) return 1;
  std::size_t r = 2;
  while (true) {
    std::size_t span = 1;
    for (std::size_t d = 0; d < digits && span < subjects; ++d) span *= r;
    if (span >= subjects) return r;
    ++r;
  }
}

}  // namespace detail

inline GenStats generate(const GenSpec& spec, std::ostream& out) {
  spec.validate();
  detail::PortableRandom rng(spec.seed);
  std::vector<std::size_t> digit_of(spec.properties + 1, 0);  // 0 = not planted, else position + 1
  for (std::size_t k = 0; k < spec.planted_key.size(); ++k) digit_of[spec.planted_key[k]] = k + 1;
  const auto radix = detail::planted_radix(spec.subjects, spec.planted_key.size());

  GenStats stats;
  std::vector<std::string> props;
  for (std::size_t j = 1; j <= spec.properties; ++j) props.push_back(spec.property_iri(j));
  auto emit = [&](const std::string& s, const std::string& p, const Term& o) {
    write_triple(out, Triple{s, p, o});
    ++stats.triples;
  };
  auto draw = [&](std::size_t i) {
    if (rng.chance(spec.duplicate_rate)) return "d" + std::to_string(rng.below(spec.duplicate_pool));
    return "v" + std::to_string(i);
  };

  for (std::size_t i = 0; i < spec.subjects; ++i) {
    const auto s = spec.subject_iri(i);
    emit(s, std::string(kRdfType), Term::iri_term(spec.class_iri));
    for (std::size_t j = 1; j <= spec.properties; ++j) {
      if (digit_of[j] != 0) {
        std::size_t v = i;
        for (std::size_t d = 1; d < digit_of[j]; ++d) v /= radix;
        emit(s, props[j - 1], Term::literal_term("k" + std::to_string(v % radix)));
        ++stats.cells;
        continue;
      }
      if (rng.chance(spec.null_rate)) continue;
      auto first = draw(i);
      emit(s, props[j - 1], Term::literal_term(first));
      ++stats.cells;
      if (rng.chance(spec.multi_value_rate)) {
        auto second = draw(i);
        // A repeated value would collapse into the same object set.
        if (second == first) second = "w" + std::to_string(i);
        emit(s, props[j - 1], Term::literal_term(second));
        ++stats.extra_values;
      }
    }
  }
  return stats;
}

inline std::string generate(const GenSpec& spec) {
  std::ostringstream out;
  generate(spec, out);
  return out.str();
}

}  // namespace keydisc
