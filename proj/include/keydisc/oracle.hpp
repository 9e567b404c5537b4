#pragma once

// Brute-force reference for key discovery. Shares nothing with the signature
// index or the scorer: object sets are compared as sorted string lists,
// subjects pairwise, and every non-empty property subset is scored.

#include "keydisc/class_table.hpp"
#include "keydisc/ntriples.hpp"
#include "keydisc/rational.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace keydisc::oracle {

inline constexpr std::size_t kMaxProperties = 20;

struct Dataset {
  std::vector<std::string> subjects;
  std::vector<std::string> properties;                   // sorted bytewise
  std::vector<std::vector<std::vector<std::string>>> objects;  // [subject][property] -> sorted distinct objects

  static Dataset from_triples(std::span<const Triple> triples, const std::set<std::string>& subjects) {
    Dataset d;
    d.subjects.assign(subjects.begin(), subjects.end());
    std::set<std::string> props;
    for (const auto& t : triples)
      if (subjects.contains(t.subject)) props.insert(t.predicate);
    d.properties.assign(props.begin(), props.end());
    std::map<std::string, std::size_t> srow, pcol;
    for (std::size_t i = 0; i < d.subjects.size(); ++i) srow[d.subjects[i]] = i;
    for (std::size_t j = 0; j < d.properties.size(); ++j) pcol[d.properties[j]] = j;
    d.objects.assign(d.subjects.size(), std::vector<std::vector<std::string>>(d.properties.size()));
    for (const auto& t : triples) {
      auto s = srow.find(t.subject);
      if (s == srow.end()) continue;
      d.objects[s->second][pcol.at(t.predicate)].push_back(t.object.lexical());
    }
    for (auto& row : d.objects)
      for (auto& cell : row) {
        std::sort(cell.begin(), cell.end());
        cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
      }
    return d;
  }

  // Requires an exact-mode table: object sets are decoded from the canonical
  // forms kept in its dictionary.
  static Dataset from_table(const ClassTable& table) {
    if (table.score_mode() != ScoreMode::exact) throw std::invalid_argument("oracle needs an exact-mode table");
    Dataset d;
    d.subjects = table.subjects();
    std::vector<std::size_t> order(table.property_count());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return table.properties()[a] < table.properties()[b]; });
    for (auto j : order) d.properties.push_back(table.properties()[j]);
    d.objects.assign(d.subjects.size(), std::vector<std::vector<std::string>>(d.properties.size()));
    for (std::size_t s = 0; s < d.subjects.size(); ++s)
      for (std::size_t k = 0; k < order.size(); ++k) d.objects[s][k] = decode_canonical(*table.cell(s, order[k]).canonical);
    return d;
  }
};

using Mask = std::uint32_t;

struct Result {
  std::vector<std::string> properties;  // bit j of a mask is properties[j]
  std::size_t subjects = 0;
  std::vector<std::size_t> distinguishable;  // indexed by mask, entry 0 unused
  std::vector<Mask> minimal;                 // ascending mask order
  std::size_t monotonicity_violations = 0;

  Rational score(Mask m) const {
    if (m == 0 || m >= distinguishable.size()) throw std::out_of_range("oracle: mask outside universe");
    if (subjects == 0) return Rational(1);
    return Rational(static_cast<std::int64_t>(distinguishable[m]), static_cast<std::int64_t>(subjects));
  }

  Mask mask_of(std::span<const std::string> labels) const {
    Mask m = 0;
    for (const auto& l : labels) {
      auto it = std::find(properties.begin(), properties.end(), l);
      if (it == properties.end()) throw std::out_of_range("oracle: unknown property " + l);
      m |= Mask{1} << (it - properties.begin());
    }
    return m;
  }

  Rational score(std::span<const std::string> labels) const { return score(mask_of(labels)); }

  std::vector<std::string> labels(Mask m) const {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < properties.size(); ++j)
      if (m & (Mask{1} << j)) out.push_back(properties[j]);
    return out;
  }

  // Minimal sets as sorted label lists, sorted.
  std::set<std::vector<std::string>> minimal_label_sets() const {
    std::set<std::vector<std::string>> out;
    for (auto m : minimal) out.insert(labels(m));
    return out;
  }
};

inline Result brute_force(const Dataset& data, const Rational& alpha) {
  const std::size_t n = data.properties.size();
  if (n > kMaxProperties)
    throw std::length_error("oracle: " + std::to_string(n) + " properties exceed the brute-force limit of " +
                            std::to_string(kMaxProperties) + "; use the search engine instead");
  const std::size_t s_count = data.subjects.size();
  const Mask full = n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1);

  // For every subject, the distinct masks of properties on which it agrees
  // with some other subject. s is indistinguishable w.r.t. P iff P is
  // contained in one of them.
  std::vector<std::vector<Mask>> agreements(s_count);
  for (std::size_t a = 0; a < s_count; ++a) {
    for (std::size_t b = 0; b < s_count; ++b) {
      if (a == b) continue;
      Mask m = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (data.objects[a][j] == data.objects[b][j]) m |= Mask{1} << j;
      agreements[a].push_back(m);
    }
    auto& v = agreements[a];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  Result r;
  r.properties = data.properties;
  r.subjects = s_count;
  r.distinguishable.assign(static_cast<std::size_t>(full) + 1, 0);
  for (Mask p = 1; p <= full && p != 0; ++p) {
    std::size_t count = 0;
    for (std::size_t s = 0; s < s_count; ++s) {
      bool alone = std::none_of(agreements[s].begin(), agreements[s].end(), [&](Mask m) { return (p & ~m) == 0; });
      count += alone;
    }
    r.distinguishable[p] = count;
  }

  auto qualifies = [&](Mask m) { return r.score(m) >= alpha; };
  auto is_key = [&](Mask m) { return r.distinguishable[m] == s_count; };

  for (Mask p = 1; p <= full && p != 0; ++p) {
    // Key monotonicity on every one-property extension, and the converse
    // direction for non-keys on every one-property removal.
    for (std::size_t j = 0; j < n; ++j) {
      Mask bit = Mask{1} << j;
      if (!(p & bit) && is_key(p) && !is_key(p | bit)) ++r.monotonicity_violations;
      if ((p & bit) && (p & ~bit) && !is_key(p) && is_key(p & ~bit)) ++r.monotonicity_violations;
    }
    if (!qualifies(p)) continue;
    bool minimal = true;
    if (n <= 14) {
      for (Mask sub = (p - 1) & p; sub != 0 && minimal; sub = (sub - 1) & p) minimal = !qualifies(sub);
    } else {
      for (std::size_t j = 0; j < n && minimal; ++j) {
        Mask bit = Mask{1} << j;
        if ((p & bit) && (p & ~bit)) minimal = !qualifies(p & ~bit);
      }
    }
    if (minimal) r.minimal.push_back(p);
  }
  return r;
}

inline Result brute_force(const ClassTable& table, const Rational& alpha) {
  return brute_force(Dataset::from_table(table), alpha);
}

}  // namespace keydisc::oracle
