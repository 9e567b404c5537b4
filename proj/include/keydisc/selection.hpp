#pragma once

#include "keydisc/ntriples.hpp"

#include <set>
#include <span>
#include <string>
#include <vector>

namespace keydisc {

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct ClassSelection {
  std::string class_iri;
  std::string type_predicate{kRdfType};
};

// Instances of one class with their outgoing edges. Type edges stay in
// `triples` as ordinary properties.
struct ClassInstances {
  std::set<std::string> subjects;
  std::vector<Triple> triples;
};

namespace detail {

inline bool is_membership(const Triple& t, const ClassSelection& sel) {
  return t.predicate == sel.type_predicate && t.object.kind == TermKind::iri && t.object.value == sel.class_iri;
}

}  // namespace detail

inline std::set<std::string> class_subjects(std::span<const Triple> triples, const ClassSelection& sel) {
  std::set<std::string> subjects;
  for (const auto& t : triples)
    if (detail::is_membership(t, sel)) subjects.insert(t.subject);
  return subjects;
}

inline ClassInstances select_class_instances(std::span<const Triple> triples, const ClassSelection& sel) {
  ClassInstances out;
  out.subjects = class_subjects(triples, sel);
  for (const auto& t : triples)
    if (out.subjects.contains(t.subject)) out.triples.push_back(t);
  return out;
}

// Consuming overload; avoids copying large inputs.
inline ClassInstances select_class_instances(std::vector<Triple>&& triples, const ClassSelection& sel) {
  ClassInstances out;
  out.subjects = class_subjects(triples, sel);
  for (auto& t : triples)
    if (out.subjects.contains(t.subject)) out.triples.push_back(std::move(t));
  triples.clear();
  return out;
}

}  // namespace keydisc
