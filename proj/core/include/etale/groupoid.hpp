#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "etale/budget.hpp"
#include "etale/error.hpp"
#include "etale/finite_space.hpp"
#include "etale/pseudogroup.hpp"

namespace etale {

/// A groupoid whose object and arrow sets are finite spaces. Structure maps are
/// stored as index tables so malformed input stays representable for checking.
struct TopGroupoid {
  SpacePtr base;
  SpacePtr arrows;
  std::vector<std::size_t> source;
  std::vector<std::size_t> target;
  std::vector<std::size_t> unit;                  ///< per base point
  std::vector<std::size_t> inverse;               ///< per arrow
  std::vector<std::optional<std::size_t>> comp;   ///< [g * arrows + f], set when source(g) = target(f)
  std::vector<std::string> names;                 ///< optional display names per arrow

  std::size_t base_size() const { return base->size(); }
  std::size_t arrow_count() const { return arrows->size(); }
  std::optional<std::size_t> compose(std::size_t g, std::size_t f) const { return comp[g * arrow_count() + f]; }
  std::string name(std::size_t a) const {
    return a < names.size() ? names[a] : std::to_string(arrows->label(a));
  }
};

/// Composable pairs (g, f) with the subspace topology of the product G1 x G1.
struct FiberProduct {
  SpacePtr space;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< point i is (g, f)
};

FiberProduct fiber_product(const TopGroupoid& g);

/// Algebraic groupoid axioms and continuity of every structure map.
CheckReport check_groupoid(const TopGroupoid& g);

struct EtaleCheck {
  bool ok = true;
  std::vector<std::size_t> source_failing;
  std::vector<std::size_t> target_failing;
  nlohmann::json to_json(const TopGroupoid& g) const;
};

EtaleCheck is_etale(const TopGroupoid& g);

/// Continuous local sections of s over an open U, as arrows per point of U in ascending order.
std::vector<std::vector<std::size_t>> local_sections(const TopGroupoid& g, const PointSet& u,
                                                     const Budgets& budgets = {});

/// The category of local sections: homs(U, V) are the continuous sections of s over U
/// landing in t-preimage(V), composed pointwise through comp. Stored underlying maps are t o section.
struct SectionCategory {
  PrePseudogroup category;
  /// sections[u * n + v][f]: arrow per point of U, ascending.
  std::vector<std::vector<std::vector<std::size_t>>> sections;
};

/// Throws NotEtale unless s and t are local homeomorphisms.
SectionCategory sections_category(const TopGroupoid& g, const Budgets& budgets = {});

/// Conditions of the section-category proposition, evaluated with the general
/// inverse-limit germs so they apply on any finite space.
struct SectionConditionReport {
  ConditionReport conditions;  ///< (1), (2.1), (2.2), (2.3), (2.3-iff), (3), and "(2) equivalence" on T1 spaces
  bool coproduct = false;      ///< the coproduct form of the decomposition
  nlohmann::json to_json() const;
};

SectionConditionReport check_prop11(const PrePseudogroup& c, const Budgets& budgets = {});

/// The germ groupoid as a topological groupoid: arrows are the points of the étale space of C(-, X).
struct PseudogroupGroupoid {
  TopGroupoid groupoid;
  EtaleSpaceBundle bundle;
  GermGroupoid germs;
};

/// Throws NotAPseudogroupSheaf unless C passes every condition in the dialect.
PseudogroupGroupoid groupoid_from_pseudogroup(const PrePseudogroup& c, Dialect dialect, const Budgets& budgets = {});

/// t restricted to each basic open [f, U] equals the underlying map of f after s.
CheckReport check_basic_open_targets(const PrePseudogroup& c, const PseudogroupGroupoid& h, Dialect dialect);

/// Canonical isomorphism G -> groupoid_from_pseudogroup(sections_category(G)).
struct GroupoidIso {
  std::vector<std::size_t> base_map;
  std::vector<std::size_t> arrow_map;
  std::vector<std::size_t> arrow_inverse;
  nlohmann::json summary;
};

/// Canonical per-hom bijections C -> sections_category(groupoid_from_pseudogroup(C)).
struct PseudogroupIso {
  std::vector<std::vector<HomId>> hom_map;      ///< [u * n + v][f]
  std::vector<std::vector<HomId>> hom_inverse;
  nlohmann::json summary;
};

/// Dialect used for groupoids over the given base: T1 exactly on T1 spaces.
Dialect dialect_for(const FiniteSpace& base);

GroupoidIso roundtrip_groupoid(const TopGroupoid& g, const Budgets& budgets = {});
PseudogroupIso roundtrip_pseudogroup(const PrePseudogroup& c, Dialect dialect, const Budgets& budgets = {});

/// Per-hom maps of a functor between pre-pseudogroups on the same space.
struct PpgMorphism {
  std::vector<std::vector<HomId>> components;  ///< [u * n + v][f]

  HomId operator()(std::size_t slot, HomId f) const { return components[slot][f]; }
  static PpgMorphism identity(const PrePseudogroup& c);
};

/// The germwise map between the groupoids of two pseudogroup sheaves induced by a morphism.
struct TransportedFunctor {
  std::vector<std::size_t> arrow_map;
  CheckReport report;  ///< continuity, s and t, units and composition
};

TransportedFunctor transport_morphism(const PrePseudogroup& c, const PrePseudogroup& d, const PpgMorphism& phi,
                                      Dialect dialect, const Budgets& budgets = {});

}  // namespace etale
