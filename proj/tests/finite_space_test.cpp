#include <gtest/gtest.h>

#include <random>

#include "etale/corpus.hpp"
#include "etale/error.hpp"
#include "etale/finite_space.hpp"
#include "oracles.hpp"

using namespace etale;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::SchemaError;
}

std::vector<std::size_t> values_of(const std::vector<std::size_t>& f) { return f; }

}  // namespace

TEST(FiniteSpace, SierpinskiOpensAndSpecialization) {
  const auto s = FiniteSpace::sierpinski();
  ASSERT_EQ(s.open_count(), 3u);
  EXPECT_EQ(s.key(s.minimal_open(0)), "0,1");
  EXPECT_EQ(s.key(s.minimal_open(1)), "1");
  EXPECT_TRUE(s.specializes(1, 0));
  EXPECT_FALSE(s.specializes(0, 1));
  EXPECT_FALSE(s.is_t1());
}

TEST(FiniteSpace, DiscreteIsT1AndHasEverySubset) {
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto d = FiniteSpace::discrete(n);
    EXPECT_EQ(d.open_count(), std::size_t{1} << n);
    EXPECT_TRUE(d.is_t1());
  }
}

TEST(FiniteSpace, IndiscreteHasTwoOpens) {
  const auto s = FiniteSpace::indiscrete(3);
  EXPECT_EQ(s.open_count(), 2u);
  EXPECT_FALSE(s.is_t1());
}

TEST(FiniteSpace, BuildRejectsMalformedFamilies) {
  EXPECT_EQ(kind_of([] { FiniteSpace::build({0, 1}, {{0, 1}}); }), ErrorKind::MissingEmptyOrFull);
  EXPECT_EQ(kind_of([] { FiniteSpace::build({0, 1, 2}, {{}, {0}, {1}, {0, 1, 2}}); }),
            ErrorKind::NotClosedUnderUnion);
  EXPECT_EQ(kind_of([] { FiniteSpace::build({0, 1, 2}, {{}, {0, 1}, {1, 2}, {0, 1, 2}}); }),
            ErrorKind::NotClosedUnderIntersection);
  EXPECT_EQ(kind_of([] { FiniteSpace::build({0, 1}, {{}, {7}, {0, 1}}); }), ErrorKind::UnknownPoint);
}

TEST(FiniteSpace, OpensAgreeWithUpSetOracle) {
  for (const auto& space : spaces_up_to_homeomorphism(4)) {
    const auto expected = oracle::opens(space);
    ASSERT_EQ(space.open_count(), expected.size());
    for (const auto m : expected) {
      PointSet s;
      for (std::size_t i = 0; i < space.size(); ++i)
        if (oracle::has(m, i)) s.insert(i);
      EXPECT_TRUE(space.is_open(s));
    }
  }
}

TEST(FiniteSpace, HomeomorphismClassCounts) {
  EXPECT_EQ(spaces_up_to_homeomorphism(1).size(), 1u);
  EXPECT_EQ(spaces_up_to_homeomorphism(2).size(), 4u);
  EXPECT_EQ(spaces_up_to_homeomorphism(3).size(), 13u);
  EXPECT_EQ(spaces_up_to_homeomorphism(4).size(), 46u);
}

TEST(FiniteSpace, KeysRoundTrip) {
  const auto c = FiniteSpace::chain(3);
  for (const auto& u : c.opens()) EXPECT_EQ(c.from_key(c.key(u)), u);
  EXPECT_EQ(kind_of([&] { c.from_key("0,9"); }), ErrorKind::UnknownPoint);
}

TEST(FiniteSpace, MinimalOpenStorageAboveLatticeBudget) {
  // 13 discrete points have 8192 opens, beyond the default lattice budget.
  std::vector<int> labels(13);
  std::vector<PointSet> minimal;
  for (std::size_t i = 0; i < 13; ++i) {
    labels[i] = static_cast<int>(i);
    minimal.push_back(PointSet::singleton(i));
  }
  const auto big = FiniteSpace::from_minimal_opens(labels, minimal);
  EXPECT_FALSE(big.has_open_lattice());
  EXPECT_TRUE(big.is_t1());
  EXPECT_TRUE(big.is_open(PointSet::singleton(4)));
}

// Continuity and local homeomorphism agree with the literal definitions on every
// self-map of every space with at most 3 points.
TEST(FiniteSpace, ContinuityAndLocalHomeoAgreeWithOracle) {
  for (const auto& space : spaces_up_to_homeomorphism(3)) {
    const auto ptr = share(space);
    const std::size_t n = space.size();
    for (const auto& dom : space.opens()) {
      const auto dm = oracle::mask_of(dom, n);
      std::vector<std::size_t> pts = dom.elements();
      std::vector<std::size_t> digits(pts.size(), 0);
      while (true) {
        std::vector<std::size_t> f(n, 0);
        for (std::size_t k = 0; k < pts.size(); ++k) f[pts[k]] = digits[k];
        const PointMap map(ptr, dom, ptr, space.all(), values_of(f));
        EXPECT_EQ(check_continuous(map).ok, oracle::continuous(space, f, dm));
        EXPECT_EQ(is_local_homeo(map).ok, oracle::local_homeo(space, f, dm));
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == n) digits[k++] = 0;
        if (k == digits.size()) break;
      }
    }
  }
}

TEST(FiniteSpace, IdentityIsHomeomorphism) {
  for (const auto& space : spaces_up_to_homeomorphism(3)) {
    const auto ptr = share(space);
    EXPECT_TRUE(is_homeomorphism(PointMap::identity(ptr, space.all())));
  }
}

TEST(FiniteSpace, CanonicalCoverIsIrredundant) {
  const auto c = FiniteSpace::discrete(3);
  const auto canonical = enumerate_covers(c, c.all(), CoverMode::Canonical);
  ASSERT_EQ(canonical.size(), 1u);
  EXPECT_EQ(canonical[0].size(), 3u);
  const auto all = enumerate_covers(c, c.all(), CoverMode::Irredundant);
  EXPECT_GE(all.size(), 1u);
  for (const auto& cover : all) {
    PointSet un;
    for (const auto& m : cover) un = un | m;
    EXPECT_EQ(un, c.all());
  }
}

TEST(FiniteSpace, CoverBudgetIsEnforced) {
  const auto d = FiniteSpace::discrete(4);
  Budgets tight;
  tight.cover_opens = 4;
  EXPECT_EQ(kind_of([&] { enumerate_covers(d, d.all(), CoverMode::Irredundant, tight); }),
            ErrorKind::CoverBudgetExceeded);
}

TEST(FiniteSpace, AutomorphismCounts) {
  EXPECT_EQ(automorphisms(FiniteSpace::discrete(3)).size(), 6u);
  EXPECT_EQ(automorphisms(FiniteSpace::chain(3)).size(), 1u);
  EXPECT_EQ(automorphisms(FiniteSpace::indiscrete(2)).size(), 2u);
}
