#include "support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <queue>

using namespace keydisc;
using namespace keydisc::testing;

namespace {

PropertyUniverse scored_universe(std::vector<Rational> scores) {
  std::vector<std::size_t> idx;
  std::vector<std::string> labels;
  std::vector<ScoreResult> singles;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    idx.push_back(i);
    labels.push_back("p" + std::to_string(i + 1));
    auto s = scores[i];
    singles.push_back(ScoreResult{static_cast<std::size_t>(s.numerator() * (1000 / s.denominator())), 1000});
  }
  return PropertyUniverse(idx, labels, singles);
}

}  // namespace

TEST(PropertySet, Basics) {
  PropertySet s{3, 1, 2};
  EXPECT_EQ(s.indices(), (std::vector<PropertySet::Index>{1, 2, 3}));
  EXPECT_EQ(s.min_index(), 1u);
  EXPECT_TRUE(s.contains(2));
  EXPECT_EQ(s.with_lower(0), (PropertySet{0, 1, 2, 3}));
  EXPECT_EQ(s.without(2), (PropertySet{1, 3}));
  EXPECT_TRUE((PropertySet{1, 3}).is_strict_subset_of(s));
  EXPECT_FALSE(s.is_strict_subset_of(s));
  EXPECT_TRUE(s.intersects(PropertySet{3, 7}));
  EXPECT_FALSE(s.intersects(PropertySet{0, 7}));
  EXPECT_THROW(PropertySet({1, 1}), std::invalid_argument);
  EXPECT_THROW(PropertySet{}.min_index(), std::logic_error);
}

// Indices are 0-based here: p1 is index 0.
TEST(Refine, FigureThreeEdges) {
  EXPECT_EQ(refine(3, PropertySet{}), (std::vector<PropertySet>{{0}, {1}, {2}}));
  EXPECT_EQ(refine(3, PropertySet{2}), (std::vector<PropertySet>{{0, 2}, {1, 2}}));
  EXPECT_TRUE(refine(3, PropertySet{0}).empty());
  EXPECT_EQ(refine(3, PropertySet{1, 2}), (std::vector<PropertySet>{{0, 1, 2}}));
}

TEST(Refine, RejectsOutOfUniverse) {
  auto u = scored_universe({Rational(0), Rational(1)});
  EXPECT_THROW(refine(u, PropertySet{5}), std::out_of_range);
}

TEST(Refine, OperatorLawsByEnumeration) {
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<int> reached(std::size_t{1} << n, 0);
    std::queue<PropertySet> todo;
    todo.push(PropertySet{});
    std::size_t improper = 0, too_many = 0;
    while (!todo.empty()) {
      auto set = todo.front();
      todo.pop();
      auto kids = refine(n, set);
      if (kids.size() > n) ++too_many;
      for (auto& k : kids) {
        if (k.size() != set.size() + 1 || !set.is_strict_subset_of(k)) ++improper;
        std::uint32_t mask = 0;
        for (auto i : k) mask |= 1u << i;
        ++reached[mask];
        todo.push(std::move(k));
      }
    }
    EXPECT_EQ(improper, 0u);
    EXPECT_EQ(too_many, 0u);
    for (std::size_t m = 1; m < reached.size(); ++m) ASSERT_EQ(reached[m], 1) << "n=" << n << " mask=" << m;
  }
}

TEST(Refine, IncompletenessWitness) {
  for (std::size_t n = 2; n <= 12; ++n) {
    // everything reachable from {p_n} contains p_n, so {p_1} is never reached
    std::queue<PropertySet> todo;
    todo.push(PropertySet{static_cast<PropertySet::Index>(n - 1)});
    bool found = false;
    while (!todo.empty() && !found) {
      auto s = todo.front();
      todo.pop();
      if (s == PropertySet{0}) found = true;
      for (auto& k : refine(n, s)) todo.push(std::move(k));
    }
    EXPECT_FALSE(found) << n;
  }
}

TEST(OrderUniverse, Nerve) {
  auto t = nerve_table();
  auto u = order_universe(t);
  ASSERT_EQ(u.size(), 4u);
  EXPECT_EQ(u.label(0), std::string(kRdfType));
  EXPECT_EQ(u.label(1), ex("graySubject"));
  EXPECT_EQ(u.label(2), ex("meshNumber"));
  EXPECT_EQ(u.label(3), ex("grayPage"));
  EXPECT_EQ(u.singleton_score(0), Rational(0));
  EXPECT_EQ(u.singleton_score(1), Rational(1, 2));
  EXPECT_EQ(u.singleton_score(3), Rational(1));
  for (std::size_t i = 1; i < u.size(); ++i) EXPECT_LE(u.singleton_score(i - 1), u.singleton_score(i));
}

TEST(OrderUniverse, SingleAndConstant) {
  std::vector<Triple> one = {{"a", "p", Term::literal_term("x")}, {"b", "p", Term::literal_term("y")}};
  EXPECT_EQ(order_universe(build_table(one, {"a", "b"})).size(), 1u);

  std::vector<Triple> constant;
  for (auto s : {"a", "b", "c"})
    for (auto p : {"z", "m", "b", "q"}) constant.push_back({s, p, Term::literal_term("same")});
  auto u = order_universe(build_table(constant, {"a", "b", "c"}));
  EXPECT_EQ(u.labels_of(u.full()), (std::vector<std::string>{"b", "m", "q", "z"}));
}

TEST(CompareSets, QuasiOrder) {
  auto u = scored_universe({Rational(1, 10), Rational(1, 2), Rational(9, 10)});
  EXPECT_EQ(compare_sets(u, PropertySet{0}, PropertySet{2}), std::weak_ordering::less);
  EXPECT_EQ(compare_sets(u, PropertySet{2}, PropertySet{0}), std::weak_ordering::greater);
  // shared minimum: both directions hold
  EXPECT_TRUE(precedes_or_equal(u, PropertySet{0, 2}, PropertySet{0, 1}));
  EXPECT_TRUE(precedes_or_equal(u, PropertySet{0, 1}, PropertySet{0, 2}));
  EXPECT_NE(PropertySet({0, 2}), PropertySet({0, 1}));
  EXPECT_EQ(compare_sets(u, PropertySet{1, 2}, PropertySet{1, 2}), std::weak_ordering::equivalent);
  EXPECT_THROW(compare_sets(u, PropertySet{}, PropertySet{1}), std::invalid_argument);
}
