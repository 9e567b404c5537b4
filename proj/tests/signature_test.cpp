#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace keydisc;

TEST(Signature, OrderInsensitive) {
  auto a = signature({"B.Pitt", "J.Roberts"});
  auto b = signature({"J.Roberts", "B.Pitt"});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.digest, b.digest);
  EXPECT_EQ(signature({"x", "x", "y"}), signature({"y", "x"}));
}

TEST(Signature, EmptySetIsReserved) {
  auto empty = signature({});
  EXPECT_TRUE(empty.is_empty_set());
  EXPECT_EQ(empty.digest, kEmptySetDigest);
  auto blank = signature({""});
  EXPECT_FALSE(blank.is_empty_set());
  EXPECT_NE(empty, blank);
  EXPECT_NE(empty.digest, blank.digest);
  EXPECT_EQ(empty, empty_signature());
}

TEST(Signature, SeparatorEscaping) {
  const std::string sep(1, kSignatureSeparator);
  const std::string esc(1, kSignatureEscape);
  // naive joining would make these collide
  EXPECT_NE(signature({"a", "b" + sep + "c"}), signature({"a" + sep + "b", "c"}));
  EXPECT_NE(signature({"a" + sep + "b"}), signature({"a", "b"}));
  EXPECT_NE(signature({"a" + esc, "b"}), signature({"a", esc + "b"}));
  EXPECT_NE(signature({"", ""}).canonical, signature({"", "x"}).canonical);
}

TEST(Signature, CanonicalDecodes) {
  std::mt19937_64 rng(11);
  const std::string alphabet = std::string("ab") + kSignatureSeparator + kSignatureEscape;
  for (int i = 0; i < 500; ++i) {
    std::set<std::string> objs;
    for (int k = 0, n = int(rng() % 4); k < n; ++k) {
      std::string w;
      for (int c = 0, m = int(rng() % 4); c < m; ++c) w += alphabet[rng() % alphabet.size()];
      objs.insert(w);
    }
    std::vector<std::string> sorted(objs.begin(), objs.end());
    EXPECT_EQ(decode_canonical(canonical_form_sorted(sorted)), sorted);
  }
  EXPECT_THROW(decode_canonical("x"), std::invalid_argument);
  EXPECT_THROW(decode_canonical(std::string(1, kSignatureEscape)), std::invalid_argument);
}

TEST(Signature, FilmSetsPairwiseDistinct) {
  std::vector<std::vector<std::string>> sobj = {
      {"B.Pitt", "J.Roberts"},
      {"G.Clooney", "B.Pitt", "J.Roberts"},
      {"B.Pitt", "G.Clooney"},
      {"G.Clooney", "N.Krause"},
      {"F.Potente"},
      {}};
  for (std::size_t i = 0; i < sobj.size(); ++i)
    for (std::size_t j = i + 1; j < sobj.size(); ++j) {
      EXPECT_NE(signature(sobj[i]), signature(sobj[j]));
      EXPECT_NE(signature(sobj[i], false), signature(sobj[j], false));
    }
}

TEST(Signature, HashedModeComparesDigests) {
  auto a = signature({"x"}, false);
  EXPECT_FALSE(a.canonical);
  EXPECT_EQ(a, signature({"x"}));
  EXPECT_EQ(a.digest.hex().size(), 32u);
}
