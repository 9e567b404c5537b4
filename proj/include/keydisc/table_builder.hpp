#pragma once

#include "keydisc/class_table.hpp"
#include "keydisc/disk_store.hpp"

#include <set>
#include <span>
#include <tuple>

namespace keydisc {

// Builds the index for `subjects` from their triples. Triples whose subject is
// not listed are ignored; repeated (s, p, o) triples collapse.
inline ClassTable build_table(std::span<const Triple> class_triples, const std::set<std::string>& subjects,
                              const StorageBackend& backend = {}, ScoreMode mode = ScoreMode::exact) {
  std::vector<std::string> subject_list(subjects.begin(), subjects.end());
  std::unordered_map<std::string_view, std::uint32_t> subject_row;
  subject_row.reserve(subject_list.size());
  for (std::size_t i = 0; i < subject_list.size(); ++i)
    subject_row.emplace(subject_list[i], static_cast<std::uint32_t>(i));

  std::vector<std::string> properties;
  std::unordered_map<std::string, std::uint32_t> property_id;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::string>> cells;
  cells.reserve(class_triples.size());
  for (const auto& t : class_triples) {
    auto row = subject_row.find(t.subject);
    if (row == subject_row.end()) continue;
    auto [it, inserted] = property_id.try_emplace(t.predicate, static_cast<std::uint32_t>(properties.size()));
    if (inserted) properties.push_back(t.predicate);
    cells.emplace_back(row->second, it->second, t.object.lexical());
  }
  std::sort(cells.begin(), cells.end());

  const bool exact = mode == ScoreMode::exact;
  std::vector<ObjectSignature> dictionary{empty_signature(exact)};
  std::unordered_map<std::string, CellCode> by_canonical;
  std::unordered_map<Digest128, CellCode, Digest128Hash> by_digest;
  std::vector<std::vector<CellCode>> columns(properties.size(), std::vector<CellCode>(subject_list.size(), kEmptyCell));

  std::vector<std::string> objects;
  for (std::size_t i = 0; i < cells.size();) {
    const auto row = std::get<0>(cells[i]);
    const auto prop = std::get<1>(cells[i]);
    objects.clear();
    std::size_t j = i;
    for (; j < cells.size() && std::get<0>(cells[j]) == row && std::get<1>(cells[j]) == prop; ++j) {
      auto& obj = std::get<2>(cells[j]);
      if (objects.empty() || objects.back() != obj) objects.push_back(std::move(obj));
    }
    std::string canonical = canonical_form_sorted(objects);
    CellCode code;
    if (exact) {
      auto [it, inserted] = by_canonical.try_emplace(canonical, static_cast<CellCode>(dictionary.size()));
      if (inserted) dictionary.push_back(signature_of_canonical(std::move(canonical), true));
      code = it->second;
    } else {
      auto sig = signature_of_canonical(std::move(canonical), false);
      auto [it, inserted] = by_digest.try_emplace(sig.digest, static_cast<CellCode>(dictionary.size()));
      if (inserted) dictionary.push_back(std::move(sig));
      code = it->second;
    }
    columns[prop][row] = code;
    i = j;
  }
  cells = {};

  if (backend.kind == BackendKind::memory) {
    return ClassTable(std::move(subject_list), std::move(properties), std::move(dictionary), mode,
                      std::make_shared<MemoryCellStore>(std::move(columns)));
  }
  write_index_file(backend.path, subject_list, properties, dictionary, mode, columns);
  columns = {};
  return open_table(backend.path);
}

}  // namespace keydisc
