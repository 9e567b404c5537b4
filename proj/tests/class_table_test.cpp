#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

using namespace keydisc;
using namespace keydisc::testing;

namespace {

std::filesystem::path temp_index(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "keydisc-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<std::size_t> mask_props(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < 32; ++j)
    if (mask & (1u << j)) out.push_back(j);
  return out;
}

// Row partition as a canonical list of blocks.
std::set<std::set<std::size_t>> blocks(const RowSignatures& rs) {
  std::map<std::uint32_t, std::set<std::size_t>> by_id;
  for (std::size_t i = 0; i < rs.rows.size(); ++i) by_id[rs.rows[i]].insert(i);
  std::set<std::set<std::size_t>> out;
  for (auto& [id, rows] : by_id) out.insert(rows);
  return out;
}

}  // namespace

TEST(ClassTable, NerveShape) {
  auto t = nerve_table();
  EXPECT_EQ(t.subject_count(), 4u);
  EXPECT_EQ(t.property_count(), 4u);
  std::set<std::string> props(t.properties().begin(), t.properties().end());
  EXPECT_EQ(props, (std::set<std::string>{ex("grayPage"), ex("graySubject"), ex("meshNumber"), std::string(kRdfType)}));
  // first-seen order
  EXPECT_EQ(t.properties()[0], std::string(kRdfType));
  EXPECT_EQ(t.properties()[1], ex("grayPage"));
  auto olf = std::find(t.subjects().begin(), t.subjects().end(), ex("Olfactory_nerve")) - t.subjects().begin();
  EXPECT_TRUE(t.cell(olf, t.require_property(ex("grayPage"))).is_empty_set());
  EXPECT_EQ(t.cell_code(olf, t.require_property(ex("grayPage"))), kEmptyCell);
  EXPECT_FALSE(t.cell(olf, t.require_property(ex("meshNumber"))).is_empty_set());
}

TEST(ClassTable, FilmEmptyCell) {
  auto t = film_table();
  EXPECT_EQ(t.subject_count(), 6u);
  auto f6 = std::find(t.subjects().begin(), t.subjects().end(), ex("f6")) - t.subjects().begin();
  EXPECT_TRUE(t.cell(f6, t.require_property(ex("hasActor"))).is_empty_set());
  EXPECT_EQ(t.covered(t.require_property(ex("hasActor"))), 5u);
}

TEST(ClassTable, DegenerateTables) {
  std::vector<Triple> none;
  auto one = build_table(none, {"s"});
  EXPECT_EQ(one.subject_count(), 1u);
  EXPECT_EQ(one.property_count(), 0u);
  auto empty = build_table(none, {});
  EXPECT_EQ(empty.subject_count(), 0u);
  auto rs = column_signatures(empty, std::span<const std::size_t>{});
  EXPECT_TRUE(rs.rows.empty());
}

TEST(ClassTable, DuplicateTriplesCollapse) {
  std::vector<Triple> ts = {{"a", "p", Term::literal_term("x")}, {"a", "p", Term::literal_term("x")},
                            {"b", "p", Term::literal_term("x")}};
  auto t = build_table(ts, {"a", "b"});
  EXPECT_EQ(t.cell_code(0, 0), t.cell_code(1, 0));
  EXPECT_EQ(decode_canonical(*t.cell(0, 0).canonical), std::vector<std::string>{"\"x\""});
}

TEST(ClassTable, UnknownProperty) {
  auto t = nerve_table();
  std::vector<std::string> labels = {ex("nope")};
  try {
    column_signatures(t, labels);
    FAIL();
  } catch (const std::out_of_range& e) {
    EXPECT_NE(std::string(e.what()).find(ex("nope")), std::string::npos);
  }
  std::vector<std::size_t> idx = {9};
  EXPECT_THROW(column_signatures(t, idx), std::out_of_range);
}

TEST(ColumnSignatures, NerveGraySubject) {
  auto t = nerve_table();
  // subjects sort as Lacrimal, Median, Olfactory, Trigeminal
  ASSERT_EQ(t.subjects()[0], ex("Lacrimal_nerve"));
  ASSERT_EQ(t.subjects()[3], ex("Trigeminal_nerve"));
  std::vector<std::string> gs = {ex("graySubject")};
  auto rs = column_signatures(t, gs);
  EXPECT_EQ(rs.rows[0], rs.rows[3]);
  EXPECT_NE(rs.rows[0], rs.rows[1]);
  EXPECT_NE(rs.rows[0], rs.rows[2]);
  EXPECT_NE(rs.rows[1], rs.rows[2]);
  EXPECT_EQ(rs.distinct, 3u);

  std::vector<std::string> pair = {ex("graySubject"), ex("grayPage")};
  EXPECT_EQ(column_signatures(t, pair).distinct, 4u);

  auto all_same = column_signatures(t, std::span<const std::size_t>{});
  EXPECT_EQ(all_same.distinct, 1u);
  for (auto r : all_same.rows) EXPECT_EQ(r, all_same.rows[0]);
}

TEST(ColumnSignatures, OrderOfPropsIrrelevant) {
  auto t = nerve_table();
  std::vector<std::size_t> a = {2, 0, 1}, b = {0, 1, 2, 1};
  EXPECT_EQ(column_signatures(t, a).rows, column_signatures(t, b).rows);
}

TEST(ClassTable, PermutationInvariance) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 30; ++round) {
    auto d = random_class(rng, {60, 6, 1});
    auto base = build_table(d.triples, d.subjects);
    std::shuffle(d.triples.begin(), d.triples.end(), rng);
    auto shuffled = build_table(d.triples, d.subjects);
    ASSERT_EQ(base.subjects(), shuffled.subjects());
    ASSERT_EQ(base.property_count(), shuffled.property_count());
    for (std::size_t p = 0; p < base.property_count(); ++p) {
      auto q = shuffled.require_property(base.properties()[p]);
      for (std::size_t s = 0; s < base.subject_count(); ++s) EXPECT_EQ(base.cell(s, p), shuffled.cell(s, q));
    }
  }
}

TEST(ClassTable, BackendEquivalence) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 20; ++round) {
    auto d = random_class(rng, {80, 7, 1});
    for (auto mode : {ScoreMode::exact, ScoreMode::hashed}) {
      auto mem = build_table(d.triples, d.subjects, StorageBackend::memory(), mode);
      auto disk = build_table(d.triples, d.subjects, StorageBackend::disk(temp_index("equiv.kdx")), mode);
      EXPECT_EQ(disk.backend(), BackendKind::disk);
      EXPECT_EQ(disk.score_mode(), mode);
      ASSERT_EQ(mem.subjects(), disk.subjects());
      ASSERT_EQ(mem.properties(), disk.properties());
      for (std::size_t s = 0; s < mem.subject_count(); ++s)
        for (std::size_t p = 0; p < mem.property_count(); ++p) {
          EXPECT_EQ(mem.cell_code(s, p), disk.cell_code(s, p));
          EXPECT_EQ(mem.cell(s, p).digest, disk.cell(s, p).digest);
          EXPECT_EQ(mem.cell(s, p).canonical, disk.cell(s, p).canonical);
        }
      const std::uint32_t full = (1u << mem.property_count()) - 1;
      for (int k = 0; k < 20; ++k) {
        auto props = mask_props(static_cast<std::uint32_t>(rng()) & full);
        EXPECT_EQ(column_signatures(mem, props).rows, column_signatures(disk, props).rows);
      }
    }
  }
}

TEST(ClassTable, SaveAndReopen) {
  auto t = nerve_table();
  auto path = temp_index("nerve.kdx");
  save_table(t, path);
  auto back = open_table(path);
  ASSERT_EQ(back.subjects(), t.subjects());
  ASSERT_EQ(back.properties(), t.properties());
  for (std::size_t s = 0; s < t.subject_count(); ++s)
    for (std::size_t p = 0; p < t.property_count(); ++p) EXPECT_EQ(back.cell(s, p), t.cell(s, p));
}

TEST(ClassTable, PartitionRefinement) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 200; ++round) {
    auto d = random_class(rng, {50, 6, 1});
    auto t = build_table(d.triples, d.subjects);
    const std::uint32_t full = (1u << t.property_count()) - 1;
    auto big = static_cast<std::uint32_t>(rng()) & full;
    auto small = big & static_cast<std::uint32_t>(rng());
    auto fine = column_signatures(t, mask_props(big));
    auto coarse = column_signatures(t, mask_props(small));
    // rows equal under the finer projection are equal under the coarser one
    for (std::size_t i = 0; i < fine.rows.size(); ++i)
      for (std::size_t j = i + 1; j < fine.rows.size(); ++j) {
        if (fine.rows[i] == fine.rows[j]) EXPECT_EQ(coarse.rows[i], coarse.rows[j]);
      }
    EXPECT_GE(fine.distinct, coarse.distinct);
    EXPECT_EQ(blocks(fine).size(), fine.distinct);
  }
}

TEST(DiskIndex, Errors) {
  EXPECT_THROW(open_table(temp_index("does-not-exist.kdx")), IndexError);

  auto bad = temp_index("bad-magic.kdx");
  std::ofstream(bad, std::ios::binary) << "NOTANINDEXFILE-----------------------------------";
  try {
    open_table(bad);
    FAIL();
  } catch (const IndexError& e) {
    EXPECT_NE(std::string(e.what()).find("bad-magic.kdx"), std::string::npos);
  }

  auto good = temp_index("trunc.kdx");
  save_table(nerve_table(), good);
  std::filesystem::resize_file(good, std::filesystem::file_size(good) - 10);
  EXPECT_THROW(open_table(good), IndexError);

  std::vector<Triple> ts = {{"a", "p", Term::literal_term("x")}};
  EXPECT_THROW(build_table(ts, {"a"}, StorageBackend::disk("/nonexistent-dir/x.kdx")), IndexError);
}
