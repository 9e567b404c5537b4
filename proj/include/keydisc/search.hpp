#pragma once

// Best-first key search over the refinement graph.
//
// 1. Score the full property set; below alpha no alpha-key can exist.
// 2. Score every singleton and order the universe by those scores.
// 3. Max-priority queue seeded with {} at priority 0. Pop the best set,
//    refine it, score each child. Children reaching alpha are solutions and
//    are not refined further; the rest are queued with their score.
//
// Every evaluated set is memoised and counted once in vnodes, including the
// full-set pre-check and the singleton evaluations.

#include "keydisc/class_table.hpp"
#include "keydisc/rational.hpp"
#include "keydisc/refinement.hpp"
#include "keydisc/scoring.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace keydisc {

enum class SearchMode { all_keys, first_key };

inline std::string_view to_string(SearchMode m) { return m == SearchMode::all_keys ? "all" : "first"; }

struct SearchConfig {
  Rational alpha{1};
  Rational tau{1, 1000};
  bool fast = false;
  SearchMode mode = SearchMode::all_keys;
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::chrono::milliseconds> time_budget;
  unsigned threads = 1;
  // Called with each set popped from the queue, before it is refined.
  std::function<void(const PropertySet&, const Rational&)> on_expand;

  void validate() const {
    if (tau < 0 || tau > alpha || alpha > 1)
      throw std::invalid_argument("search config requires 0 <= tau <= alpha <= 1 (tau=" + to_fraction_string(tau) +
                                  ", alpha=" + to_fraction_string(alpha) + ")");
    if (threads == 0) throw std::invalid_argument("search config requires at least one thread");
  }
};

struct DiscoveredSet {
  std::vector<std::string> properties;     // ascending universe index
  std::vector<std::size_t> table_indices;  // ascending
  ScoreResult score;
};

struct SearchTimings {
  double ordering_ms = 0;
  double search_ms = 0;
};

struct SearchReport {
  std::vector<DiscoveredSet> keys;  // discovery order
  std::uint64_t vnodes = 0;
  std::size_t subjects = 0;
  std::size_t universe_size = 0;           // |P|, the denominator basis of the reduction ratio
  std::size_t searched_universe_size = 0;  // after the fast-search tau filter
  std::optional<Rational> reduction_ratio;
  std::string reduction_percent = "n/a";
  bool no_key_exists = false;
  bool terminated_early = false;
  std::string termination_reason;
  std::uint64_t revisits = 0;
  std::size_t peak_queue = 0;
  std::size_t peak_memory_bytes = 0;  // queue + memo estimate, deterministic
  SearchTimings timings;
};

// 1 - vnodes / (2^n - 1). Exact for n <= 62.
inline Rational reduction_ratio(std::uint64_t vnodes, std::size_t universe_size) {
  if (universe_size == 0) throw std::invalid_argument("reduction_ratio: empty universe");
  if (universe_size > 62) throw std::overflow_error("reduction_ratio: universe too large for an exact ratio");
  const auto total = (std::int64_t{1} << universe_size) - 1;
  if (vnodes > static_cast<std::uint64_t>(total))
    throw std::out_of_range("reduction_ratio: " + std::to_string(vnodes) + " visited nodes exceed 2^" +
                            std::to_string(universe_size) + " - 1");
  return Rational(total - static_cast<std::int64_t>(vnodes), total);
}

inline std::string reduction_percent(std::uint64_t vnodes, std::size_t universe_size) {
  if (universe_size <= 62) return to_percent(reduction_ratio(vnodes, universe_size));
  long double rr = 1.0L - static_cast<long double>(vnodes) / std::pow(2.0L, static_cast<long double>(universe_size));
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << rr * 100.0L;
  return out.str();
}

// Drops duplicates and every set that strictly contains another one. Keeps
// the input order otherwise.
inline std::vector<PropertySet> minimality_filter(std::vector<PropertySet> solutions) {
  std::vector<PropertySet> out;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < solutions.size() && keep; ++j) {
      if (i == j) continue;
      if (solutions[j].is_strict_subset_of(solutions[i])) keep = false;
      else if (j < i && solutions[j] == solutions[i]) keep = false;
    }
    if (keep) out.push_back(solutions[i]);
  }
  return out;
}

namespace detail {

struct VectorHash {
  std::size_t operator()(const std::vector<std::size_t>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto x : v) h = (h ^ x) * 0x100000001b3ull;
    return h;
  }
};

class NodeLimitReached : public std::exception {};
class TimeBudgetExceeded : public std::exception {};

class KeySearch {
 public:
  KeySearch(const ClassTable& table, const SearchConfig& config) : table_(table), config_(config) {}

  SearchReport run() {
    using clock = std::chrono::steady_clock;
    start_ = clock::now();
    report_.subjects = table_.subject_count();
    report_.universe_size = table_.property_count();
    if (report_.universe_size == 0) {
      report_.no_key_exists = true;
      report_.termination_reason = "class has no properties";
      return report_;
    }

    try {
      std::vector<std::size_t> all(table_.property_count());
      std::iota(all.begin(), all.end(), std::size_t{0});
      if (score_batch({all})[0].score() < config_.alpha) {
        report_.no_key_exists = true;
      } else {
        auto t0 = clock::now();
        order();
        report_.timings.ordering_ms = ms_since(t0);
        auto t1 = clock::now();
        explore();
        report_.timings.search_ms = ms_since(t1);
      }
    } catch (const NodeLimitReached&) {
      report_.terminated_early = true;
      report_.termination_reason = "node limit of " + std::to_string(*config_.max_nodes) + " reached";
    } catch (const TimeBudgetExceeded&) {
      report_.terminated_early = true;
      report_.termination_reason = "time budget of " + std::to_string(config_.time_budget->count()) + " ms exceeded";
    }

    finish();
    return report_;
  }

 private:
  struct MemoEntry {
    ScoreResult score;
    bool reached = false;  // produced by refine during the search
  };

  struct QueueEntry {
    Rational priority;
    PropertySet set;
  };

  // Highest score first, then smaller sets, then lexicographic indices.
  struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (a.priority != b.priority) return a.priority > b.priority;
      if (a.set.size() != b.set.size()) return a.set.size() < b.set.size();
      return a.set < b.set;
    }
  };

  static double ms_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
  }

  static std::size_t set_bytes(std::size_t n) { return 64 + n * sizeof(std::size_t); }

  void check_budget() const {
    if (config_.time_budget && std::chrono::steady_clock::now() - start_ > *config_.time_budget)
      throw TimeBudgetExceeded{};
  }

  // Scores the requested table-index sets, reusing memoised results. New
  // evaluations may run in parallel but are committed in request order.
  std::vector<ScoreResult> score_batch(const std::vector<std::vector<std::size_t>>& sets) {
    std::vector<ScoreResult> out(sets.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (auto it = memo_.find(sets[i]); it != memo_.end()) {
        out[i] = it->second.score;
      } else if (std::find_if(missing.begin(), missing.end(), [&](std::size_t m) { return sets[m] == sets[i]; }) ==
                 missing.end()) {
        missing.push_back(i);
      }
    }
    bool truncated = false;
    if (config_.max_nodes) {
      auto room = *config_.max_nodes > report_.vnodes ? *config_.max_nodes - report_.vnodes : 0;
      if (missing.size() > room) {
        missing.resize(room);
        truncated = true;
      }
    }

    const unsigned workers = std::min<std::size_t>(config_.threads, missing.size());
    if (workers <= 1) {
      for (auto i : missing) out[i] = compute_score(table_, sets[i]);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t k = w; k < missing.size(); k += workers) out[missing[k]] = compute_score(table_, sets[missing[k]]);
        });
      }
      for (auto& t : pool) t.join();
    }
    for (auto i : missing) {
      memo_.emplace(sets[i], MemoEntry{out[i], false});
      memo_bytes_ += set_bytes(sets[i].size()) + sizeof(MemoEntry);
      ++report_.vnodes;
    }
    note_memory();
    if (truncated) throw NodeLimitReached{};
    // Requests repeated inside one batch resolve from the memo.
    for (std::size_t i = 0; i < sets.size(); ++i) out[i] = memo_.at(sets[i]).score;
    return out;
  }

  void order() {
    std::vector<std::vector<std::size_t>> singles;
    for (std::size_t p = 0; p < table_.property_count(); ++p) singles.push_back({p});
    auto scores = score_batch(singles);

    std::vector<std::size_t> candidates;
    for (std::size_t p = 0; p < table_.property_count(); ++p)
      if (!config_.fast || scores[p].score() > config_.tau) candidates.push_back(p);
    universe_ = order_universe(table_, std::move(candidates), [&](std::size_t p) { return scores[p]; });
    report_.searched_universe_size = universe_.size();
  }

  void explore() {
    std::set<QueueEntry, QueueOrder> queue;
    std::vector<bool> banned(universe_.size(), false);
    queue.insert({Rational(0), PropertySet{}});
    queue_bytes_ = set_bytes(0);

    while (!queue.empty()) {
      check_budget();
      auto node = queue.extract(queue.begin()).value();
      queue_bytes_ -= set_bytes(node.set.size());
      if (config_.on_expand) config_.on_expand(node.set, node.priority);

      auto children = refine(universe_, node.set);
      if (config_.fast) {
        std::erase_if(children, [&](const PropertySet& c) { return banned[c.min_index()]; });
      }
      // A superset of a solution qualifies by monotonicity but is not
      // minimal, and neither is anything refined from it.
      if (!solutions_.empty()) {
        std::erase_if(children, [&](const PropertySet& c) {
          return std::any_of(solutions_.begin(), solutions_.end(), [&](const PropertySet& s) { return s.is_subset_of(c); });
        });
      }
      std::vector<std::vector<std::size_t>> requests;
      requests.reserve(children.size());
      for (const auto& c : children) requests.push_back(universe_.to_table(c));
      auto scores = score_batch(requests);

      bool found = false;
      for (std::size_t i = 0; i < children.size(); ++i) {
        auto& entry = memo_.at(requests[i]);
        if (entry.reached) ++report_.revisits;
        entry.reached = true;

        if (scores[i].score() >= config_.alpha) {
          solutions_.push_back(children[i]);
          found = true;
          if (config_.mode == SearchMode::first_key) {
            solutions_.back() = minimize(children[i]);
            return;
          }
        } else {
          queue_bytes_ += set_bytes(children[i].size());
          queue.insert({scores[i].score(), std::move(children[i])});
        }
      }
      report_.peak_queue = std::max(report_.peak_queue, queue.size());
      note_memory();

      if (config_.fast && found) {
        for (const auto& s : solutions_)
          for (auto i : s) banned[i] = true;
        for (auto it = queue.begin(); it != queue.end();) {
          bool hit = std::any_of(it->set.begin(), it->set.end(), [&](auto i) { return banned[i]; });
          if (hit) {
            queue_bytes_ -= set_bytes(it->set.size());
            it = queue.erase(it);
          } else {
            ++it;
          }
        }
      }
    }
  }

  // Greedy reduction of a solution to a minimal one: drop any element whose
  // removal keeps the score at alpha. Extra evaluations count as vnodes.
  PropertySet minimize(PropertySet set) {
    for (auto i : std::vector<PropertySet::Index>(set.begin(), set.end())) {
      if (set.size() == 1) break;
      auto smaller = set.without(i);
      if (score_batch({universe_.to_table(smaller)})[0].score() >= config_.alpha) set = std::move(smaller);
    }
    return set;
  }

  void note_memory() { report_.peak_memory_bytes = std::max(report_.peak_memory_bytes, queue_bytes_ + memo_bytes_); }

  void finish() {
    for (const auto& s : minimality_filter(solutions_)) {
      DiscoveredSet d;
      d.properties = universe_.labels_of(s);
      d.table_indices = universe_.to_table(s);
      d.score = memo_.at(d.table_indices).score;
      report_.keys.push_back(std::move(d));
    }
    if (report_.universe_size > 0) {
      if (report_.universe_size <= 62) report_.reduction_ratio = reduction_ratio(report_.vnodes, report_.universe_size);
      report_.reduction_percent = reduction_percent(report_.vnodes, report_.universe_size);
    }
  }

  const ClassTable& table_;
  SearchConfig config_;
  std::chrono::steady_clock::time_point start_;
  PropertyUniverse universe_;
  std::unordered_map<std::vector<std::size_t>, MemoEntry, VectorHash> memo_;
  std::vector<PropertySet> solutions_;
  std::size_t queue_bytes_ = 0;
  std::size_t memo_bytes_ = 0;
  SearchReport report_;
};

}  // namespace detail

inline SearchReport find_keys(const ClassTable& table, const SearchConfig& config = {}) {
  config.validate();
  return detail::KeySearch(table, config).run();
}

}  // namespace keydisc
