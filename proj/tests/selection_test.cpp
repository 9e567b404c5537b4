#include "support.hpp"

#include <gtest/gtest.h>

using namespace keydisc;
using namespace keydisc::testing;

TEST(Selection, NerveInstances) {
  auto f = load_fixture("nerve.nt", "Nerve");
  std::set<std::string> expected = {ex("Trigeminal_nerve"), ex("Median_nerve"), ex("Lacrimal_nerve"),
                                    ex("Olfactory_nerve")};
  EXPECT_EQ(f.instances.subjects, expected);
  // type edges are kept
  EXPECT_EQ(f.instances.triples.size(), 13u);
}

TEST(Selection, AbsentClass) {
  auto f = load_fixture("nerve.nt", "Muscle");
  EXPECT_TRUE(f.instances.subjects.empty());
  EXPECT_TRUE(f.instances.triples.empty());
}

TEST(Selection, TwoClassFile) {
  auto ts = parse_triples(std::string_view(
      "<http://e/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://e/A> .\n"
      "<http://e/a> <http://e/p> \"1\" .\n"
      "<http://e/b> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://e/B> .\n"
      "<http://e/b> <http://e/p> \"2\" .\n"
      "_:c <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://e/A> .\n"
      "_:c <http://e/q> \"3\" .\n"
      "<http://e/d> <http://e/p> \"4\" .\n"));
  auto a = select_class_instances(std::span<const Triple>(ts), ClassSelection{"http://e/A"});
  // manual filter
  std::set<std::string> subjects;
  for (const auto& t : ts)
    if (t.predicate == kRdfType && t.object.value == "http://e/A") subjects.insert(t.subject);
  std::vector<Triple> expected;
  for (const auto& t : ts)
    if (subjects.contains(t.subject)) expected.push_back(t);
  EXPECT_EQ(a.subjects, subjects);
  EXPECT_EQ(a.triples, expected);
  EXPECT_EQ(a.subjects, (std::set<std::string>{"http://e/a", "_:c"}));
}

TEST(Selection, LiteralObjectIsNotMembership) {
  auto ts = parse_triples(std::string_view("<http://e/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> \"http://e/A\" .\n"));
  EXPECT_TRUE(class_subjects(ts, ClassSelection{"http://e/A"}).empty());
}

TEST(Selection, CustomTypePredicate) {
  auto ts = parse_triples(std::string_view("<http://e/a> <http://e/kind> <http://e/A> .\n"));
  EXPECT_EQ(class_subjects(ts, ClassSelection{"http://e/A", "http://e/kind"}).size(), 1u);
  EXPECT_TRUE(class_subjects(ts, ClassSelection{"http://e/A"}).empty());
}

TEST(Selection, IdempotentAndClosed) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto d = random_class(rng, {40, 5, 1});
    // add noise subjects outside the class
    d.triples.push_back({ex("stray"), ex("p0"), Term::literal_term("v0")});
    ClassSelection sel{ex("T")};
    auto once = select_class_instances(std::span<const Triple>(d.triples), sel);
    auto twice = select_class_instances(std::span<const Triple>(once.triples), sel);
    EXPECT_EQ(once.subjects, twice.subjects);
    EXPECT_EQ(once.triples, twice.triples);
    for (const auto& t : once.triples) EXPECT_TRUE(once.subjects.contains(t.subject));
    auto moved = select_class_instances(std::vector<Triple>(d.triples), sel);
    EXPECT_EQ(moved.triples, once.triples);
  }
}
