#include <gtest/gtest.h>

#include "etale/corpus.hpp"
#include "etale/presheaf.hpp"
#include "oracles.hpp"

using namespace etale;

namespace {

/// On the discrete 2-point space: P({0}) = {a}, P({1}) = {b}, P(X) = given sections.
Presheaf two_point(std::vector<std::string> top) {
  auto space = share(FiniteSpace::discrete(2));
  const auto& s = *space;
  std::vector<std::vector<std::string>> sections(s.open_count());
  sections[s.empty_id()] = {"*"};
  sections[s.open_id(PointSet::singleton(0))] = {"a"};
  sections[s.open_id(PointSet::singleton(1))] = {"b"};
  sections[s.full_id()] = std::move(top);
  return Presheaf::from_function(space, sections,
                                 [](OpenId from, OpenId to, SectionId s) { return from == to ? s : SectionId{0}; });
}

}  // namespace

TEST(Presheaf, ConstantPresheafIsClean) {
  auto space = share(FiniteSpace::chain(3));
  const auto p = constant_presheaf(space, {"*"});
  EXPECT_TRUE(check_presheaf(p).ok());
}

TEST(Presheaf, NonIdentityDiagonalIsReported) {
  auto space = share(FiniteSpace::sierpinski());
  const auto good = constant_presheaf(space, {"a", "b"});
  auto table = good.restriction_table();
  const auto x = space->full_id();
  table[x * space->open_count() + x] = {1, 0};
  const Presheaf bad(space, good.section_table(), table);
  const auto r = check_presheaf(bad);
  ASSERT_FALSE(r.ok());
}

TEST(Presheaf, SwappedCompositeOnChainIsReported) {
  // Chain {} within {1} within X on the Sierpinski space: X to {1} swaps, the rest are identities.
  auto space = share(FiniteSpace::sierpinski());
  const auto good = constant_presheaf(space, {"a", "b"});
  auto table = good.restriction_table();
  const auto n = space->open_count();
  table[space->full_id() * n + space->open_id(PointSet::singleton(1))] = {1, 0};
  const Presheaf bad(space, good.section_table(), table);
  const auto r = check_presheaf(bad);
  ASSERT_FALSE(r.ok());
}

TEST(Presheaf, SheafExamplesOnTwoPoints) {
  EXPECT_TRUE(is_sheaf(two_point({"ab"})).ok);
  const auto doubled = two_point({"c", "d"});
  const auto r = is_sheaf(doubled);
  ASSERT_FALSE(r.ok);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->gluings, 2u);
  EXPECT_FALSE(is_sheaf(doubled, SheafMode::Exhaustive).ok);
}

TEST(Presheaf, SkyscrapersAreSheaves) {
  auto space = share(FiniteSpace::sierpinski());
  for (std::size_t x = 0; x < 2; ++x) {
    const auto p = skyscraper(space, x, {"a", "b"});
    EXPECT_TRUE(is_sheaf(p, SheafMode::Exhaustive).ok);
    EXPECT_EQ(stalk(p, x), (std::vector<std::string>{"a", "b"}));
  }
  const auto at1 = skyscraper(space, 1, {"a", "b"});
  EXPECT_EQ(at1.section_count(space->open_id(PointSet::singleton(1))), 2u);
  EXPECT_EQ(at1.section_count(space->full_id()), 2u);
  const auto at0 = skyscraper(space, 0, {"a", "b"});
  EXPECT_EQ(at0.sections(space->open_id(PointSet::singleton(1))), std::vector<std::string>{kSkyscraperSentinel});
  EXPECT_EQ(at0.section_count(space->full_id()), 2u);
  EXPECT_THROW(skyscraper(space, 0, {}), Error);
}

TEST(Presheaf, StalksOnSierpinski) {
  auto space = share(FiniteSpace::sierpinski());
  auto sections = std::vector<std::vector<std::string>>(space->open_count(), {"a", "b"});
  sections[space->open_id(PointSet::singleton(1))] = {"p", "q", "r"};
  const auto p = Presheaf::from_function(space, sections, [&](OpenId from, OpenId to, SectionId s) {
    return from == to ? s : SectionId{0};
  });
  EXPECT_EQ(stalk(p, 0), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(stalk(p, 1), (std::vector<std::string>{"p", "q", "r"}));
  EXPECT_THROW(stalk(p, 5), Error);
}

TEST(Presheaf, ProductCardinalities) {
  auto space = share(FiniteSpace::discrete(2));
  const auto p = product_presheaf(space, {skyscraper(space, 0, {"a", "b"}), skyscraper(space, 1, {"x", "y", "z"})});
  EXPECT_EQ(p.section_count(space->full_id()), 6u);
  const auto terminal = product_presheaf(space, {});
  for (OpenId u = 0; u < space->open_count(); ++u) EXPECT_EQ(terminal.section_count(u), 1u);
}

TEST(Presheaf, EtaleSpaceOfIdentityPresheaf) {
  auto space = share(FiniteSpace::discrete(2));
  const auto p = constant_presheaf(space, {"a", "b"});
  const auto bundle = etale_space(p);
  EXPECT_EQ(bundle.total->size(), 4u);
  EXPECT_EQ(bundle.total->open_count(), 16u);
  EXPECT_TRUE(is_local_homeo(bundle.projection).ok);
  const auto single = etale_space(constant_presheaf(share(FiniteSpace::chain(3)), {"*"}));
  EXPECT_EQ(single.total->size(), 3u);
  EXPECT_TRUE(is_homeomorphism(single.projection));
}

TEST(Presheaf, BasicOpensProjectOntoTheirOpen) {
  for (const auto& entry : presheaf_corpus(kDefaultSeed, 3, 1)) {
    const auto& p = entry.presheaf;
    const auto bundle = etale_space(p);
    for (OpenId u = 0; u < p.open_count(); ++u)
      for (SectionId f = 0; f < p.section_count(u); ++f) {
        const auto basic = basic_open(p, bundle, u, f);
        EXPECT_TRUE(bundle.total->is_open(basic));
        EXPECT_EQ(bundle.projection.image(basic), p.space().open(u)) << entry.name;
        EXPECT_EQ(basic.size(), p.space().open(u).size());
      }
  }
}

TEST(Presheaf, SheafifyCollapsesGermwiseEqualSections) {
  const auto p = two_point({"c", "d"});
  const auto hat = sheafify(p);
  EXPECT_EQ(hat.sheaf.section_count(p.space().full_id()), 1u);
  EXPECT_TRUE(is_sheaf(hat.sheaf, SheafMode::Exhaustive).ok);
  EXPECT_TRUE(check_unit_stalks(p, hat).ok());
}

// The stalks here are singletons, so the product of skyscrapers has one section
// per open and the inclusion of the sheafification into it is an isomorphism.
TEST(Presheaf, InclusionIntoProductOnSingletonStalks) {
  const auto p = two_point({"c", "d"});
  const auto hat = sheafify(p);
  const auto sharp = sharp_presheaf(p);
  for (OpenId u = 0; u < sharp.open_count(); ++u) EXPECT_EQ(sharp.section_count(u), 1u);
  PresheafMorphism incl;
  for (OpenId u = 0; u < sharp.open_count(); ++u) incl.components.push_back({0});
  const auto r = check_morphism_stalkwise_iso(hat.sheaf, sharp, incl);
  EXPECT_TRUE(r.stalkwise_iso);
  EXPECT_TRUE(r.openwise_iso);
}

TEST(Presheaf, CollapseToTerminalIsNotStalkwiseIso) {
  auto space = share(FiniteSpace::discrete(2));
  const auto big = sheafify(constant_presheaf(space, {"a", "b"})).sheaf;
  EXPECT_EQ(big.section_count(space->full_id()), 4u);
  const auto terminal = constant_presheaf(space, {"*"});
  PresheafMorphism collapse;
  for (OpenId u = 0; u < big.open_count(); ++u) collapse.components.emplace_back(big.section_count(u), 0);
  const auto r = check_morphism_stalkwise_iso(big, terminal, collapse);
  EXPECT_FALSE(r.stalkwise_iso);
  EXPECT_FALSE(r.openwise_iso);
  EXPECT_TRUE(r.failing_point.has_value());
}

TEST(Presheaf, StalkwiseIsoRequiresSheaves) {
  const auto p = two_point({"c", "d"});
  EXPECT_THROW(check_morphism_stalkwise_iso(p, p, PresheafMorphism::identity(p)), Error);
}

TEST(Presheaf, SheafifyOfSheafHasBijectiveUnit) {
  auto space = share(FiniteSpace::chain(3));
  const auto sky = skyscraper(space, 1, {"a", "b", "c"});
  const auto hat = sheafify(sky);
  const auto r = check_morphism_stalkwise_iso(sky, hat.sheaf, hat.unit);
  EXPECT_TRUE(r.stalkwise_iso);
  EXPECT_TRUE(r.openwise_iso);
}

TEST(Presheaf, UniversalityIntoTerminalSheaf) {
  auto space = share(FiniteSpace::sierpinski());
  const auto p = constant_presheaf(space, {"a", "b"});
  const auto hat = sheafify(p);
  const auto terminal = constant_presheaf(space, {"*"});
  PresheafMorphism to_point;
  for (OpenId u = 0; u < p.open_count(); ++u) to_point.components.emplace_back(p.section_count(u), 0);
  const auto u = check_presheaf_universality(p, hat, terminal, to_point);
  EXPECT_EQ(u.solutions, 1u);
  EXPECT_TRUE(u.exhausted);
}

// Property sweep over the seeded corpus.
class PresheafCorpus : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(PresheafCorpus, Invariants) {
  for (const auto& entry : presheaf_corpus(GetParam(), 3, 2)) {
    SCOPED_TRACE(entry.name);
    const auto& p = entry.presheaf;
    ASSERT_TRUE(check_presheaf(p).ok());
    for (std::size_t x = 0; x < p.space().size(); ++x) {
      const auto q = oracle::colimit_quotient(p, x);
      EXPECT_TRUE(q.matches_minimal_open);
      EXPECT_EQ(q.classes, stalk(p, x).size());
    }
    const auto brute = oracle::sheaf_over_all_covers(p);
    ASSERT_TRUE(brute.has_value());
    EXPECT_EQ(is_sheaf(p, SheafMode::Canonical).ok, *brute);
    EXPECT_EQ(is_sheaf(p, SheafMode::Exhaustive).ok, *brute);
    EXPECT_TRUE(is_local_homeo(etale_space(p).projection).ok);

    const auto hat = sheafify(p);
    EXPECT_EQ(oracle::sheaf_over_all_covers(hat.sheaf), std::optional<bool>(true));
    EXPECT_TRUE(check_presheaf_morphism(p, hat.sheaf, hat.unit).ok());
    EXPECT_TRUE(check_unit_stalks(p, hat).ok());
    const auto again = sheafify(hat.sheaf);
    const auto iso = check_morphism_stalkwise_iso(hat.sheaf, again.sheaf, again.unit);
    EXPECT_TRUE(iso.openwise_iso);
    if (*brute) {
      const auto same = check_morphism_stalkwise_iso(p, hat.sheaf, hat.unit);
      EXPECT_TRUE(same.openwise_iso);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PresheafCorpus, ::testing::Values(1u, 2u, 3u, kDefaultSeed));
