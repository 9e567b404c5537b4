#pragma once

// Score-ordered property universe and the upward refinement operator.
//
// Universe indices 0..n-1 are sorted by ascending singleton score, ties by
// bytewise property label. refine(P) adds exactly one property whose index is
// strictly below min(P); refine({}) yields every singleton. Each non-empty
// subset therefore has exactly one parent: itself minus its minimum.

#include "keydisc/class_table.hpp"
#include "keydisc/rational.hpp"
#include "keydisc/scoring.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace keydisc {

class PropertySet {
 public:
  using Index = std::uint32_t;

  PropertySet() = default;
  PropertySet(std::initializer_list<Index> indices) : PropertySet(std::vector<Index>(indices)) {}
  explicit PropertySet(std::vector<Index> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
      throw std::invalid_argument("PropertySet: duplicate index");
  }

  bool empty() const { return indices_.empty(); }
  std::size_t size() const { return indices_.size(); }
  Index min_index() const {
    if (indices_.empty()) throw std::logic_error("PropertySet: min_index of empty set");
    return indices_.front();
  }
  bool contains(Index i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

  // Adds an index below the current minimum.
  PropertySet with_lower(Index i) const {
    PropertySet out;
    out.indices_.reserve(indices_.size() + 1);
    out.indices_.push_back(i);
    out.indices_.insert(out.indices_.end(), indices_.begin(), indices_.end());
    return out;
  }

  PropertySet without(Index i) const {
    PropertySet out;
    for (auto x : indices_)
      if (x != i) out.indices_.push_back(x);
    return out;
  }

  bool intersects(const PropertySet& other) const {
    auto a = indices_.begin();
    auto b = other.indices_.begin();
    while (a != indices_.end() && b != other.indices_.end()) {
      if (*a == *b) return true;
      if (*a < *b) ++a;
      else ++b;
    }
    return false;
  }

  bool is_subset_of(const PropertySet& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
  }
  bool is_strict_subset_of(const PropertySet& other) const { return size() < other.size() && is_subset_of(other); }

  const std::vector<Index>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend auto operator<=>(const PropertySet&, const PropertySet&) = default;
  friend bool operator==(const PropertySet&, const PropertySet&) = default;

 private:
  std::vector<Index> indices_;
};

struct PropertySetHash {
  std::size_t operator()(const PropertySet& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto i : s) h = (h ^ i) * 0x100000001b3ull;
    return h;
  }
};

class PropertyUniverse {
 public:
  PropertyUniverse() = default;
  PropertyUniverse(std::vector<std::size_t> table_index, std::vector<std::string> labels,
                   std::vector<ScoreResult> singleton)
      : table_index_(std::move(table_index)), labels_(std::move(labels)), singleton_(std::move(singleton)) {}

  std::size_t size() const { return table_index_.size(); }
  std::size_t table_index(PropertySet::Index i) const { return table_index_.at(i); }
  const std::string& label(PropertySet::Index i) const { return labels_.at(i); }
  const ScoreResult& singleton(PropertySet::Index i) const { return singleton_.at(i); }
  Rational singleton_score(PropertySet::Index i) const { return singleton_.at(i).score(); }

  std::vector<std::size_t> to_table(const PropertySet& set) const {
    std::vector<std::size_t> out;
    out.reserve(set.size());
    for (auto i : set) out.push_back(table_index_.at(i));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::string> labels_of(const PropertySet& set) const {
    std::vector<std::string> out;
    for (auto i : set) out.push_back(labels_.at(i));
    return out;
  }

  PropertySet full() const {
    std::vector<PropertySet::Index> all(size());
    std::iota(all.begin(), all.end(), 0u);
    return PropertySet(std::move(all));
  }

 private:
  std::vector<std::size_t> table_index_;
  std::vector<std::string> labels_;
  std::vector<ScoreResult> singleton_;
};

// Orders the given table properties by singleton score. `score_singleton`
// maps a table property index to its ScoreResult, which lets a caller route
// the evaluations through its own memo.
template <typename SingletonScore>
PropertyUniverse order_universe(const ClassTable& table, std::vector<std::size_t> candidates,
                                SingletonScore&& score_singleton) {
  struct Entry {
    std::size_t table_index;
    ScoreResult score;
  };
  std::vector<Entry> entries;
  entries.reserve(candidates.size());
  for (auto p : candidates) {
    table.check_property(p);
    entries.push_back({p, score_singleton(p)});
  }
  std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    auto sa = a.score.score();
    auto sb = b.score.score();
    if (sa != sb) return sa < sb;
    return table.properties()[a.table_index] < table.properties()[b.table_index];
  });
  std::vector<std::size_t> index;
  std::vector<std::string> labels;
  std::vector<ScoreResult> scores;
  for (auto& e : entries) {
    index.push_back(e.table_index);
    labels.push_back(table.properties()[e.table_index]);
    scores.push_back(e.score);
  }
  return PropertyUniverse(std::move(index), std::move(labels), std::move(scores));
}

inline PropertyUniverse order_universe(const ClassTable& table) {
  std::vector<std::size_t> all(table.property_count());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return order_universe(table, std::move(all), [&](std::size_t p) {
    std::size_t one[] = {p};
    return compute_score(table, one);
  });
}

// Children in ascending order of the added index.
inline std::vector<PropertySet> refine(std::size_t universe_size, const PropertySet& set) {
  std::vector<PropertySet> out;
  const auto limit = set.empty() ? static_cast<PropertySet::Index>(universe_size) : set.min_index();
  out.reserve(limit);
  for (PropertySet::Index i = 0; i < limit; ++i) out.push_back(set.with_lower(i));
  return out;
}

inline std::vector<PropertySet> refine(const PropertyUniverse& universe, const PropertySet& set) {
  for (auto i : set)
    if (i >= universe.size()) throw std::out_of_range("refine: index outside universe");
  return refine(universe.size(), set);
}

// The quasi-order on non-empty sets: compares the minimum singleton score,
// which sits at each set's minimum index.
inline std::weak_ordering compare_sets(const PropertyUniverse& universe, const PropertySet& a, const PropertySet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("compare_sets: empty property set");
  auto sa = universe.singleton_score(a.min_index());
  auto sb = universe.singleton_score(b.min_index());
  if (sa < sb) return std::weak_ordering::less;
  if (sb < sa) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

inline bool precedes_or_equal(const PropertyUniverse& universe, const PropertySet& a, const PropertySet& b) {
  return compare_sets(universe, a, b) != std::weak_ordering::greater;
}

}  // namespace keydisc
