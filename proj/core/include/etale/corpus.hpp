#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "etale/groupoid.hpp"
#include "etale/groups.hpp"
#include "etale/presheaf.hpp"
#include "etale/pseudogroup.hpp"

namespace etale {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Every finite space on 1..max_points points, one per homeomorphism class, labelled 0..n-1.
std::vector<FiniteSpace> spaces_up_to_homeomorphism(std::size_t max_points);

/// Homeomorphisms of a space as permutations of point indices.
std::vector<std::vector<std::size_t>> automorphisms(const FiniteSpace& space);

// Groupoid constructions.

TopGroupoid unit_groupoid(const SpacePtr& space);
/// Pair groupoid on n discrete points.
TopGroupoid pair_groupoid(std::size_t n);
/// A group as a groupoid over one point.
TopGroupoid group_groupoid(const GroupTable& group);
/// (H acting on X) x K: arrows (h, k, x) from x to h.x, minimal opens {(h, k, x') : x' in U_x}.
/// The group H is given by permutations of X closed under composition.
TopGroupoid action_groupoid(const SpacePtr& space, const std::vector<std::vector<std::size_t>>& acting,
                            const GroupTable& kernel);
TopGroupoid disjoint_union(const std::vector<TopGroupoid>& parts);
/// Renumbers arrows by a permutation: arrow a becomes perm[a].
TopGroupoid relabel_arrows(const TopGroupoid& g, const std::vector<std::size_t>& perm);
TopGroupoid shuffle_arrows(const TopGroupoid& g, Rng& rng);

struct CorpusGroupoid {
  std::string name;
  TopGroupoid groupoid;
};

/// Every étale groupoid over a discrete base of at most max_base points with at most
/// max_arrows arrows, up to isomorphism, arrows shuffled with the seed.
std::vector<CorpusGroupoid> exhaustive_etale_groupoids(std::size_t max_base, std::size_t max_arrows,
                                                       std::uint64_t seed = kDefaultSeed);

/// Seeded disjoint unions of (H acting on X) x K over arbitrary finite spaces.
std::vector<CorpusGroupoid> random_etale_groupoids(std::size_t count, std::uint64_t seed, std::size_t max_base,
                                                   std::size_t max_arrows);

// Presheaves.

/// F(U) = values for every open U, restrictions the identity.
Presheaf constant_presheaf(const SpacePtr& space, const std::vector<std::string>& values);

/// Random presheaf of tuples: sections over U are families over the points of U, optionally
/// tagged so that distinct sections can share all restrictions.
Presheaf random_presheaf(const SpacePtr& space, Rng& rng);

struct CorpusPresheaf {
  std::string name;
  Presheaf presheaf;
};

std::vector<CorpusPresheaf> presheaf_corpus(std::uint64_t seed, std::size_t max_points, std::size_t per_space);

// Group presheaves and pseudogroups.

/// Locally constant functions into the group: a sheaf of groups.
GroupSheafInput locally_constant_group_sheaf(const SpacePtr& space, const GroupTable& group);
/// The group on every non-empty open and the trivial group on the empty one.
GroupSheafInput constant_group_presheaf(const SpacePtr& space, const GroupTable& group);

struct CorpusPseudogroup {
  std::string name;
  PrePseudogroup pseudogroup;
  Dialect dialect = Dialect::T1;
};

/// Pseudogroup sheaves on spaces of at most max_points points: Homeo^l, group sheaves and section categories.
std::vector<CorpusPseudogroup> pseudogroup_sheaf_corpus(std::uint64_t seed, std::size_t max_points);

/// Pre-pseudogroups on discrete spaces (T1 dialect), sheaves and non-sheaves alike.
std::vector<CorpusPseudogroup> pre_pseudogroup_corpus(std::uint64_t seed, std::size_t max_points);

/// Sub-pre-pseudogroups of c obtained by dropping one morphism between the full space and itself.
std::vector<PrePseudogroup> truncations(const PrePseudogroup& c);

// Mutations.

struct Mutant {
  std::string name;
  std::string kind;  ///< associativity, restriction, invertibility, gluing
  enum class Target { Pseudogroup, Presheaf, Groupoid } target = Target::Pseudogroup;
  PrePseudogroup pseudogroup;
  Presheaf presheaf;
  TopGroupoid groupoid;
};

/// Ten seeded single-table mutations of valid instances.
std::vector<Mutant> mutation_suite(std::uint64_t seed = kDefaultSeed);

}  // namespace etale

namespace etale {

/// Names of the checks that reject the mutant; empty when it slips through.
std::vector<std::string> detecting_checks(const Mutant& m);

}  // namespace etale
