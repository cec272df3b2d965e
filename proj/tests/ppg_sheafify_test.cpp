#include <gtest/gtest.h>

#include "etale/classical.hpp"
#include "etale/corpus.hpp"
#include "etale/groups.hpp"
#include "etale/ppg_sheafify.hpp"

using namespace etale;

namespace {

std::size_t top_homs(const PrePseudogroup& c) { return c.hom_size(c.space().full_id(), c.space().full_id()); }

}  // namespace

TEST(PpgSheafify, SheafIsAFixedPoint) {
  const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
  const auto hat = ppg_sheafify(c);
  EXPECT_EQ(top_homs(hat.sheaf), 4u);
  EXPECT_TRUE(check_ppg_morphism(hat.unit, c, hat.sheaf).ok());
  EXPECT_TRUE(check_unit_germs(c, hat).ok());
  for (OpenId u = 0; u < c.open_count(); ++u)
    for (OpenId v = 0; v < c.open_count(); ++v) EXPECT_EQ(hat.sheaf.hom_size(u, v), c.hom_size(u, v));
}

TEST(PpgSheafify, TruncationIsRestored) {
  const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
  for (const auto& t : truncations(c)) {
    EXPECT_EQ(top_homs(t), 3u);
    const auto hat = ppg_sheafify(t);
    EXPECT_EQ(top_homs(hat.sheaf), 4u);
    EXPECT_TRUE(def21_conditions(hat.sheaf).ok());
  }
}

TEST(PpgSheafify, ConstantGroupPresheafGainsLocallyConstantSections) {
  auto space = share(FiniteSpace::discrete(2));
  const auto c = from_group_sheaf(constant_group_presheaf(space, cyclic_group(2)));
  EXPECT_EQ(top_homs(c), 2u);
  const auto hat = ppg_sheafify(c);
  EXPECT_EQ(top_homs(hat.sheaf), 4u);
  EXPECT_TRUE(is_pseudogroup_sheaf(hat.sheaf, Dialect::T1).ok());
  EXPECT_TRUE(check_prop45(c, hat).ok());
}

TEST(PpgSheafify, RequiresT1Space) {
  const auto c = build_homeo_l(share(FiniteSpace::sierpinski()));
  try {
    ppg_sheafify(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotT1Space);
  }
}

TEST(PpgSheafify, ClosureOrderDoesNotMatter) {
  for (const auto& entry : pre_pseudogroup_corpus(kDefaultSeed, 3)) {
    SCOPED_TRACE(entry.name);
    const auto a = ppg_sheafify(entry.pseudogroup, ClosureOrder::ComposeFirst);
    const auto b = ppg_sheafify(entry.pseudogroup, ClosureOrder::GlueFirst);
    EXPECT_EQ(a.selection, b.selection);
  }
}

TEST(PpgSheafify, CorpusProperties) {
  for (const auto& entry : pre_pseudogroup_corpus(kDefaultSeed, 3)) {
    SCOPED_TRACE(entry.name);
    const auto& c = entry.pseudogroup;
    const auto hat = ppg_sheafify(c);
    EXPECT_TRUE(check_ppg_morphism(hat.unit, c, hat.sheaf).ok());
    EXPECT_TRUE(check_unit_germs(c, hat).ok());
    EXPECT_TRUE(def21_conditions(hat.sheaf).ok());
    const auto prop = check_prop45(c, hat);
    EXPECT_TRUE(prop.passes("iso"));
    EXPECT_TRUE(prop.passes("compose-subsumed"));
    // Idempotence: the sheafification of a sheaf adds nothing.
    const auto again = ppg_sheafify(hat.sheaf);
    for (OpenId u = 0; u < c.open_count(); ++u)
      for (OpenId v = 0; v < c.open_count(); ++v) EXPECT_EQ(again.sheaf.hom_size(u, v), hat.sheaf.hom_size(u, v));
  }
}

TEST(PpgSheafify, UniversalityIntoSheafificationAndHomeoL) {
  std::size_t certified = 0;
  for (const auto& entry : pre_pseudogroup_corpus(kDefaultSeed, 2)) {
    SCOPED_TRACE(entry.name);
    const auto& c = entry.pseudogroup;
    const auto hat = ppg_sheafify(c);
    try {
      const auto u = check_universality(c, hat, hat.sheaf, hat.unit);
      EXPECT_TRUE(u.report.ok());
      EXPECT_EQ(u.solutions, 1u);
      ++certified;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::EnumerationBudgetExceeded);
    }
  }
  EXPECT_GE(certified, 5u);
}

TEST(PpgSheafify, UnderlyingMorphismIntoHomeoL) {
  const auto c = truncations(build_homeo_l(share(FiniteSpace::discrete(2)))).front();
  const auto homeo = build_homeo_l(c.space_ptr());
  const auto phi = underlying_morphism(c, homeo, Dialect::T1);
  EXPECT_TRUE(check_ppg_morphism(phi, c, homeo).ok());
  const auto hat = ppg_sheafify(c);
  const auto u = check_universality(c, hat, homeo, phi);
  EXPECT_TRUE(u.report.ok());
  EXPECT_EQ(u.solutions, 1u);
}

TEST(PpgSheafify, EnumerationBudgetIsExplicit) {
  const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
  const auto hat = ppg_sheafify(c);
  Budgets tight;
  tight.enum_hom_size = 1;
  try {
    check_universality(c, hat, hat.sheaf, hat.unit, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EnumerationBudgetExceeded);
  }
}

TEST(Classical, HomeoLGivesSevenPartialHomeomorphisms) {
  const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
  const auto h = classical_pseudogroup(c, Dialect::T1);
  EXPECT_EQ(h.maps.size(), 7u);
  EXPECT_TRUE(check_classical(h).ok());
  const auto back = classical_to_concrete(h);
  EXPECT_EQ(top_homs(back), 4u);
  EXPECT_TRUE(is_concrete(back, Dialect::T1));
}

TEST(Classical, ClosureOfSwap) {
  auto space = share(FiniteSpace::discrete(2));
  const PointMap swap(space, space->all(), space, space->all(), {1, 0});
  const auto h = classical_closure(space, {swap});
  EXPECT_EQ(h.maps.size(), 7u);
  EXPECT_TRUE(h.contains(swap));
  EXPECT_EQ(top_homs(classical_to_concrete(h)), 4u);
  EXPECT_EQ(classical_closure(space, {}).maps.size(), 4u);
}

TEST(Classical, MissingInverseIsReported) {
  auto space = share(FiniteSpace::discrete(2));
  auto h = classical_closure(space, {PointMap(space, space->all(), space, space->all(), {1, 0})});
  const auto swap = PointMap(space, space->all(), space, space->all(), {1, 0});
  std::erase(h.maps, swap);
  EXPECT_FALSE(check_classical(h).ok());
}

TEST(Classical, RequiresConcreteInput) {
  const auto c = from_group_sheaf(locally_constant_group_sheaf(share(FiniteSpace::discrete(2)), cyclic_group(2)));
  try {
    classical_pseudogroup(c, Dialect::T1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotConcrete);
  }
}

TEST(Classical, SierpinskiIsNotT1) {
  const auto c = build_homeo_l(share(FiniteSpace::sierpinski()));
  const auto h = classical_pseudogroup(c, Dialect::NonT1);
  EXPECT_EQ(h.maps.size(), 3u);
  EXPECT_THROW(classical_to_concrete(h), Error);
}
