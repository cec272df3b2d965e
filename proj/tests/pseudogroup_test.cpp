#include <gtest/gtest.h>

#include "etale/corpus.hpp"
#include "etale/groups.hpp"
#include "etale/pseudogroup.hpp"
#include "oracles.hpp"

using namespace etale;

namespace {

std::size_t hom_count(const PrePseudogroup& c, const PointSet& u, const PointSet& v) {
  return c.hom_size(c.space().open_id(u), c.space().open_id(v));
}

}  // namespace

// Hom-set sizes of Homeo^l against brute-force enumeration of all functions.
TEST(HomeoL, HomSizesMatchEnumerationOracle) {
  for (const auto& space : spaces_up_to_homeomorphism(3)) {
    const auto c = build_homeo_l(share(space));
    const std::size_t n = space.size();
    for (const auto& u : space.opens())
      for (const auto& v : space.opens())
        EXPECT_EQ(hom_count(c, u, v), oracle::count_local_homeos(space, oracle::mask_of(u, n), oracle::mask_of(v, n)));
  }
}

TEST(HomeoL, PinnedCounts) {
  const auto d2 = build_homeo_l(share(FiniteSpace::discrete(2)));
  EXPECT_EQ(d2.hom_size(d2.space().full_id(), d2.space().full_id()), 4u);
  const auto d3 = build_homeo_l(share(FiniteSpace::discrete(3)));
  EXPECT_EQ(d3.hom_size(d3.space().full_id(), d3.space().full_id()), 27u);
  const auto s = build_homeo_l(share(FiniteSpace::sierpinski()));
  EXPECT_EQ(s.hom_size(s.space().full_id(), s.space().full_id()), 1u);
  for (OpenId v = 0; v < s.open_count(); ++v) EXPECT_EQ(s.hom_size(s.space().empty_id(), v), 1u);
}

TEST(HomeoL, ConditionsOnDiscreteAndSierpinski) {
  const auto d2 = build_homeo_l(share(FiniteSpace::discrete(2)));
  const auto t1 = def21_conditions(d2);
  EXPECT_TRUE(t1.ok()) << t1.to_json().dump();

  const auto s = build_homeo_l(share(FiniteSpace::sierpinski()));
  const auto r = def21_conditions(s);
  EXPECT_TRUE(r.passes("(1)"));
  EXPECT_FALSE(r.passes("(2)"));
  EXPECT_TRUE(r.passes("(3)"));
  EXPECT_TRUE(r.passes("(4)"));
}

TEST(HomeoL, ConditionTwoHoldsExactlyOnT1Spaces) {
  for (const auto& space : spaces_up_to_homeomorphism(3)) {
    const auto c = build_homeo_l(share(space));
    const auto r = def21_conditions(c);
    EXPECT_EQ(r.passes("(2)"), space.is_t1());
    EXPECT_TRUE(r.passes("(1)"));
    EXPECT_TRUE(r.passes("(3)"));
    EXPECT_TRUE(r.passes("(4)"));
    EXPECT_TRUE(is_pseudogroup_sheaf(c, space.is_t1() ? Dialect::T1 : Dialect::NonT1).ok());
  }
}

TEST(PrePseudogroup, CategoryLawsOnCorpus) {
  for (const auto& c : pseudogroup_sheaf_corpus(kDefaultSeed, 3)) {
    SCOPED_TRACE(c.name);
    EXPECT_TRUE(check_category(c.pseudogroup).ok());
  }
}

TEST(PrePseudogroup, T1DialectRejectsNonT1Space) {
  const auto s = build_homeo_l(share(FiniteSpace::sierpinski()));
  try {
    check_pre_pseudogroup(s, Dialect::T1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotT1Space);
  }
}

TEST(PrePseudogroup, NonT1DialectNeedsUnderlyingFunctor) {
  auto data = build_homeo_l(share(FiniteSpace::sierpinski())).data();
  data.underlying.reset();
  const PrePseudogroup bare(data);
  try {
    check_pre_pseudogroup(bare, Dialect::NonT1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingUnderlying);
  }
}

TEST(PrePseudogroup, HomPresheafRestrictsByPrecomposition) {
  const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
  const auto p = hom_presheaf(c, c.space().full_id());
  EXPECT_TRUE(check_presheaf(p).ok());
  EXPECT_TRUE(is_sheaf(p, SheafMode::Exhaustive).ok);
  EXPECT_EQ(p.section_count(c.space().full_id()), 4u);
}

// The attained limit homs(U_x, U_y) agrees with compatible families over all opens containing y.
TEST(GermGroupoid, AttainedLimitMatchesInverseLimit) {
  for (const auto& entry : pseudogroup_sheaf_corpus(kDefaultSeed, 3)) {
    const auto& c = entry.pseudogroup;
    if (!c.space().is_t1()) continue;
    SCOPED_TRACE(entry.name);
    const auto& space = c.space();
    for (std::size_t x = 0; x < space.size(); ++x)
      for (std::size_t y = 0; y < space.size(); ++y) {
        const auto limit = inverse_limit_germs(c, x, y);
        const auto attained = germ_target_hom(c, x, y, Dialect::T1);
        EXPECT_EQ(limit.families.size(), attained.elements.size());
      }
  }
}

// On T1 spaces both dialects describe the same germ sets.
TEST(GermGroupoid, DialectsAgreeOnT1Spaces) {
  for (const auto& entry : pseudogroup_sheaf_corpus(kDefaultSeed, 3)) {
    const auto& c = entry.pseudogroup;
    if (!c.space().is_t1() || !c.has_underlying()) continue;
    SCOPED_TRACE(entry.name);
    for (std::size_t x = 0; x < c.space().size(); ++x)
      for (std::size_t y = 0; y < c.space().size(); ++y) {
        auto a = germ_target_hom(c, x, y, Dialect::T1).in_total;
        auto b = germ_target_hom(c, x, y, Dialect::NonT1).in_total;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
      }
  }
}

TEST(GermGroupoid, HomeoLOnDiscreteTwoIsPairGroupoid) {
  const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
  const auto g = build_germ_groupoid(c, Dialect::T1);
  EXPECT_EQ(g.arrows.size(), 4u);
  EXPECT_TRUE(g.is_groupoid());
  EXPECT_TRUE(check_germ_composition(c, Dialect::T1).ok());
}

// Constant Z/2 on the discrete 2-point space: the germ groupoid is two copies of Z/2.
TEST(GermGroupoid, ConstantGroupSheafGivesVertexGroups) {
  auto space = share(FiniteSpace::discrete(2));
  const auto input = locally_constant_group_sheaf(space, cyclic_group(2));
  ASSERT_TRUE(check_group_presheaf(input).ok());
  const auto c = from_group_sheaf(input);
  EXPECT_TRUE(is_pseudogroup_sheaf(c, Dialect::T1).ok());
  const auto g = build_germ_groupoid(c, Dialect::T1);
  EXPECT_EQ(g.arrows.size(), 4u);
  for (const auto& a : g.arrows) EXPECT_EQ(a.source, a.target);
  for (std::size_t x = 0; x < 2; ++x) EXPECT_EQ(g.end(x, x) - g.begin(x, x), 2u);
}

// One point, homs(X, X) = {id, e} with e o e = e: the germ of e has no inverse.
TEST(GermGroupoid, NonInvertibleGermIsReported) {
  auto space = share(FiniteSpace::discrete(1));
  const PrePseudogroup c = PrePseudogroup::generate(
      space, {{"0"}, {"0"}, {}, {"id", "e"}},
      [](OpenId u, OpenId, OpenId, HomId g, HomId f) { return u == 0 ? HomId{0} : std::max(g, f); },
      {HomId{0}, HomId{0}, std::nullopt, HomId{0}});
  ASSERT_TRUE(check_category(c).ok());
  const auto g = germ_category(c, Dialect::T1);
  EXPECT_TRUE(g.category_report.ok());
  EXPECT_FALSE(g.groupoid_report.ok());
  EXPECT_FALSE(def21_conditions(c).passes("(3)"));
  EXPECT_THROW(build_germ_groupoid(c, Dialect::T1), Error);
}

TEST(GroupSheaf, FromGroupSheafHomSets) {
  auto space = share(FiniteSpace::discrete(2));
  const auto input = locally_constant_group_sheaf(space, cyclic_group(3));
  const auto c = from_group_sheaf(input);
  const auto& s = c.space();
  EXPECT_EQ(c.hom_size(s.full_id(), s.full_id()), 9u);
  EXPECT_EQ(c.hom_size(s.open_id(PointSet::singleton(0)), s.full_id()), 3u);
  EXPECT_EQ(c.hom_size(s.full_id(), s.open_id(PointSet::singleton(0))), 0u);
  EXPECT_FALSE(is_concrete(c, Dialect::T1));
}

TEST(GroupSheaf, ConstantPresheafIsNotASheaf) {
  auto space = share(FiniteSpace::discrete(2));
  const auto c = from_group_sheaf(constant_group_presheaf(space, cyclic_group(2)));
  const auto r = def21_conditions(c);
  EXPECT_TRUE(r.passes("(1)"));
  EXPECT_FALSE(r.passes("(4)"));
}

TEST(Subcategory, DroppingAnInclusionIsRejected) {
  const auto c = build_homeo_l(share(FiniteSpace::discrete(2)));
  const auto full = c.space().full_id();
  const auto id = *c.incl(full, full);
  EXPECT_FALSE(subcategory(c, [&](OpenId u, OpenId v, HomId f) { return !(u == full && v == full && f == id); }));
  EXPECT_TRUE(subcategory(c, [](OpenId, OpenId, HomId) { return true; }).has_value());
}
