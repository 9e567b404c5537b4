#pragma once

// Discriminability score: the fraction of subjects whose projected row occurs
// exactly once, i.e. subjects distinguishable from every other subject.

#include "keydisc/class_table.hpp"
#include "keydisc/rational.hpp"

#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace keydisc {

struct ScoreResult {
  std::size_t distinguishable = 0;
  std::size_t total = 0;
  std::size_t distinct_rows = 0;  // auxiliary: number of distinct projected rows
  bool vacuous = false;           // total == 0, scored 1 by convention

  Rational score() const {
    if (total == 0) return Rational(1);
    return Rational(static_cast<std::int64_t>(distinguishable), static_cast<std::int64_t>(total));
  }

  friend bool operator==(const ScoreResult&, const ScoreResult&) = default;
};

struct AlmostKeySpec {
  Rational alpha{1};
};

inline Rational alpha_for_k(std::size_t k, std::size_t total_subjects) {
  if (total_subjects == 0) throw std::invalid_argument("alpha_for_k: no subjects");
  if (k > total_subjects)
    throw std::invalid_argument("alpha_for_k: k=" + std::to_string(k) + " exceeds |S|=" + std::to_string(total_subjects));
  return Rational(static_cast<std::int64_t>(total_subjects - k), static_cast<std::int64_t>(total_subjects));
}

inline AlmostKeySpec almost_key_spec_for_k(std::size_t k, std::size_t total_subjects) {
  return AlmostKeySpec{alpha_for_k(k, total_subjects)};
}

inline bool is_key(const ScoreResult& r) { return r.distinguishable == r.total; }
inline bool is_almost_key(const ScoreResult& r, const AlmostKeySpec& spec) { return r.score() >= spec.alpha; }

inline ScoreResult score_rows(const RowSignatures& rows) {
  ScoreResult r;
  r.total = rows.rows.size();
  r.vacuous = r.total == 0;
  r.distinct_rows = rows.distinct;
  if (rows.distinct == r.total) {
    r.distinguishable = r.total;
    return r;
  }
  std::vector<std::uint32_t> freq(rows.distinct, 0);
  for (auto id : rows.rows) ++freq[id];
  for (auto f : freq) r.distinguishable += f == 1;
  return r;
}

// `props` are table property indices; the empty set is allowed.
inline ScoreResult compute_score(const ClassTable& table, std::span<const std::size_t> props) {
  return score_rows(column_signatures(table, props));
}

inline ScoreResult compute_score(const ClassTable& table, std::span<const std::string> labels) {
  return score_rows(column_signatures(table, labels));
}

}  // namespace keydisc
