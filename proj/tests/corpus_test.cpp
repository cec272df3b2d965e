#include <gtest/gtest.h>

#include <set>

#include "etale/corpus.hpp"
#include "etale/groups.hpp"

using namespace etale;

TEST(Corpus, ExhaustiveGroupoidsAreEtaleAndDistinct) {
  const auto corpus = exhaustive_etale_groupoids(3, 9);
  EXPECT_EQ(corpus.size(), 91u);
  std::set<std::string> names;
  for (const auto& g : corpus) {
    EXPECT_TRUE(check_groupoid(g.groupoid).ok()) << g.name;
    EXPECT_TRUE(is_etale(g.groupoid).ok) << g.name;
    EXPECT_LE(g.groupoid.arrow_count(), 9u);
    names.insert(g.name);
  }
  EXPECT_EQ(names.size(), corpus.size());
}

TEST(Corpus, RandomGroupoidsRespectBounds) {
  for (const auto& g : random_etale_groupoids(50, 11, 4, 12)) {
    EXPECT_LE(g.groupoid.base_size(), 4u);
    EXPECT_LE(g.groupoid.arrow_count(), 12u);
    EXPECT_TRUE(is_etale(g.groupoid).ok) << g.name;
  }
}

TEST(Corpus, SeedsAreReproducible) {
  const auto a = random_etale_groupoids(5, 3, 4, 12);
  const auto b = random_etale_groupoids(5, 3, 4, 12);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(a[i].groupoid.comp, b[i].groupoid.comp);
  }
}

TEST(Corpus, GroupCatalogTablesAreGroups) {
  for (const auto& g : group_catalog()) {
    const auto& t = g.table;
    for (std::size_t a = 0; a < t.order(); ++a) {
      EXPECT_EQ(t.mul[a][t.identity], a) << g.name;
      EXPECT_EQ(t.mul[a][t.inverse[a]], t.identity) << g.name;
      for (std::size_t b = 0; b < t.order(); ++b)
        for (std::size_t c = 0; c < t.order(); ++c) EXPECT_EQ(t.mul[t.mul[a][b]][c], t.mul[a][t.mul[b][c]]);
    }
  }
}

TEST(Corpus, LocallyConstantGroupSheafIsASheaf) {
  for (const auto& space : spaces_up_to_homeomorphism(3)) {
    const auto g = locally_constant_group_sheaf(share(space), cyclic_group(2));
    EXPECT_TRUE(check_group_presheaf(g).ok());
    EXPECT_TRUE(is_sheaf(g.presheaf, SheafMode::Exhaustive).ok);
  }
}

TEST(Corpus, PseudogroupSheafCorpusPassesItsDialect) {
  const auto corpus = pseudogroup_sheaf_corpus(kDefaultSeed, 3);
  EXPECT_GE(corpus.size(), 20u);
  for (const auto& c : corpus) EXPECT_TRUE(is_pseudogroup_sheaf(c.pseudogroup, c.dialect).ok()) << c.name;
}

TEST(Corpus, EveryMutantIsDetected) {
  const auto mutants = mutation_suite();
  ASSERT_EQ(mutants.size(), 10u);
  std::set<std::string> kinds;
  for (const auto& m : mutants) {
    EXPECT_FALSE(detecting_checks(m).empty()) << m.name;
    kinds.insert(m.kind);
  }
  EXPECT_EQ(kinds, (std::set<std::string>{"associativity", "restriction", "invertibility", "gluing"}));
}
