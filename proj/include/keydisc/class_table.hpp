#pragma once

// Per-class signature index.
//
// Rows are the class instances (sorted bytewise), columns the properties in
// first-seen order. Each cell holds a code into the table's signature
// dictionary; code 0 is the empty object set. In exact mode the dictionary is
// keyed by canonical form, so equal codes <=> equal object sets. In hashed
// mode it is keyed by the 128-bit digest only.
//
// Two stores back the cells: a column-major in-memory store, and a
// memory-mapped single-file store whose records are sorted by
// (subject id, property id), see disk_store.hpp. build_table lives in
// table_builder.hpp.

#include "keydisc/ntriples.hpp"
#include "keydisc/signature.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace keydisc {

enum class ScoreMode { exact, hashed };
enum class BackendKind { memory, disk };

inline std::string_view to_string(ScoreMode m) { return m == ScoreMode::exact ? "exact" : "hashed"; }
inline std::string_view to_string(BackendKind k) { return k == BackendKind::memory ? "memory" : "disk"; }

struct StorageBackend {
  BackendKind kind = BackendKind::memory;
  std::filesystem::path path;  // disk only

  static StorageBackend memory() { return {}; }
  static StorageBackend disk(std::filesystem::path p) { return {BackendKind::disk, std::move(p)}; }
};

class IndexError : public std::runtime_error {
 public:
  IndexError(const std::filesystem::path& path, std::string_view operation, std::string_view detail)
      : std::runtime_error("index " + std::string(operation) + " failed for '" + path.string() + "': " +
                           std::string(detail)) {}
};

using CellCode = std::uint32_t;
inline constexpr CellCode kEmptyCell = 0;

class CellStore {
 public:
  virtual ~CellStore() = default;
  virtual BackendKind kind() const = 0;
  // May return a view of internal storage or of `scratch`.
  virtual std::span<const CellCode> column(std::size_t property, std::vector<CellCode>& scratch) const = 0;
  virtual CellCode cell(std::size_t subject, std::size_t property) const = 0;
};

class MemoryCellStore final : public CellStore {
 public:
  explicit MemoryCellStore(std::vector<std::vector<CellCode>> columns) : columns_(std::move(columns)) {}

  BackendKind kind() const override { return BackendKind::memory; }
  std::span<const CellCode> column(std::size_t property, std::vector<CellCode>&) const override {
    return columns_[property];
  }
  CellCode cell(std::size_t subject, std::size_t property) const override { return columns_[property][subject]; }

  const std::vector<std::vector<CellCode>>& columns() const { return columns_; }

 private:
  std::vector<std::vector<CellCode>> columns_;
};

// Immutable after construction; safe for concurrent readers.
class ClassTable {
 public:
  ClassTable() = default;
  ClassTable(std::vector<std::string> subjects, std::vector<std::string> properties,
             std::vector<ObjectSignature> dictionary, ScoreMode mode, std::shared_ptr<const CellStore> store)
      : subjects_(std::move(subjects)),
        properties_(std::move(properties)),
        dictionary_(std::move(dictionary)),
        mode_(mode),
        store_(std::move(store)) {
    for (std::size_t i = 0; i < properties_.size(); ++i) property_lookup_.emplace(properties_[i], i);
  }

  const std::vector<std::string>& subjects() const { return subjects_; }
  const std::vector<std::string>& properties() const { return properties_; }
  std::size_t subject_count() const { return subjects_.size(); }
  std::size_t property_count() const { return properties_.size(); }
  ScoreMode score_mode() const { return mode_; }
  BackendKind backend() const { return store_ ? store_->kind() : BackendKind::memory; }
  const std::vector<ObjectSignature>& dictionary() const { return dictionary_; }
  const CellStore& store() const { return *store_; }

  std::optional<std::size_t> property_index(std::string_view label) const {
    auto it = property_lookup_.find(std::string(label));
    if (it == property_lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_property(std::string_view label) const {
    if (auto idx = property_index(label)) return *idx;
    throw std::out_of_range("property not in table: " + std::string(label));
  }

  void check_property(std::size_t idx) const {
    if (idx >= properties_.size())
      throw std::out_of_range("property index " + std::to_string(idx) + " not in table (" +
                              std::to_string(properties_.size()) + " properties)");
  }

  CellCode cell_code(std::size_t subject, std::size_t property) const { return store_->cell(subject, property); }
  const ObjectSignature& cell(std::size_t subject, std::size_t property) const {
    return dictionary_[cell_code(subject, property)];
  }

  std::span<const CellCode> column(std::size_t property, std::vector<CellCode>& scratch) const {
    return store_->column(property, scratch);
  }

  // Fraction numerator: subjects with at least one object for `property`.
  std::size_t covered(std::size_t property) const {
    std::vector<CellCode> scratch;
    auto col = column(property, scratch);
    return static_cast<std::size_t>(std::count_if(col.begin(), col.end(), [](CellCode c) { return c != kEmptyCell; }));
  }

 private:
  std::vector<std::string> subjects_;
  std::vector<std::string> properties_;
  std::unordered_map<std::string, std::size_t> property_lookup_;
  std::vector<ObjectSignature> dictionary_;
  ScoreMode mode_ = ScoreMode::exact;
  std::shared_ptr<const CellStore> store_ = std::make_shared<MemoryCellStore>(std::vector<std::vector<CellCode>>{});
};

// Per-row equivalence-class ids for a projection onto a property set. Two
// rows get the same id iff their cells agree on every selected property.
// Ids are assigned densely in row order.
struct RowSignatures {
  std::vector<std::uint32_t> rows;
  std::size_t distinct = 0;
};

inline RowSignatures column_signatures(const ClassTable& table, std::span<const std::size_t> props) {
  std::vector<std::size_t> sorted(props.begin(), props.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto p : sorted) table.check_property(p);

  const std::size_t n = table.subject_count();
  RowSignatures out;
  out.rows.assign(n, 0);
  out.distinct = n > 0 ? 1 : 0;
  std::vector<CellCode> scratch;
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  for (auto p : sorted) {
    // Once every row is unique further columns cannot merge anything.
    if (out.distinct == n) break;
    auto col = table.column(p, scratch);
    ids.clear();
    ids.reserve(std::min(n, out.distinct * 4 + 16));
    for (std::size_t i = 0; i < n; ++i) {
      auto key = (static_cast<std::uint64_t>(out.rows[i]) << 32) | col[i];
      auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size()));
      out.rows[i] = it->second;
    }
    out.distinct = ids.size();
  }
  return out;
}

inline RowSignatures column_signatures(const ClassTable& table, std::span<const std::string> labels) {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& l : labels) idx.push_back(table.require_property(l));
  return column_signatures(table, idx);
}

}  // namespace keydisc
