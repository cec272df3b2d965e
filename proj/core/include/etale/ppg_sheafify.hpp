#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "etale/budget.hpp"
#include "etale/error.hpp"
#include "etale/groupoid.hpp"
#include "etale/pseudogroup.hpp"

namespace etale {

/// Functoriality and preservation of inclusions.
CheckReport check_ppg_morphism(const PpgMorphism& phi, const PrePseudogroup& c, const PrePseudogroup& d);

/// Germ families: sharp(U, V) holds every choice (a_x), a_x in homs(U_x, V), for x in U.
struct SharpPseudogroup {
  PrePseudogroup category;
  /// families[u * n + v][a]: the germ a_x for each point x of U, ascending.
  std::vector<std::vector<std::vector<HomId>>> families;
  /// f |-> its family of germs.
  PpgMorphism unit;
  GermDecomposition decomposition;

  std::optional<HomId> find_family(OpenId u, OpenId v, const std::vector<HomId>& family) const;
};

/// Requires a T1 space (NotT1Space) and an exact germ decomposition (DecompositionViolated).
SharpPseudogroup ppg_sharp(const PrePseudogroup& c);

enum class ClosureOrder { ComposeFirst, GlueFirst };

/// Membership of sharp morphisms in a sub-structure, per hom-set.
using FamilySelection = std::vector<std::vector<bool>>;

/// Least selection containing the unit image and closed under the enabled operators:
/// composition in sharp, and restriction plus gluing over canonical covers.
FamilySelection close_families(const SharpPseudogroup& sharp, bool compose, bool glue, ClosureOrder order,
                               std::size_t* passes = nullptr);

struct PpgSheafification {
  SharpPseudogroup sharp;
  FamilySelection selection;
  PrePseudogroup sheaf;
  /// embedding[u * n + v][k]: the sharp morphism behind morphism k of the sheaf.
  std::vector<std::vector<HomId>> embedding;
  PpgMorphism unit;
  std::size_t passes = 0;
};

PpgSheafification ppg_sheafify(const PrePseudogroup& c, ClosureOrder order = ClosureOrder::ComposeFirst);

/// Before/after hom-set sizes.
nlohmann::json sheafification_report(const PrePseudogroup& c, const PpgSheafification& hat);

/// The unit restricted to germs, homs(U_x, V) -> sheaf(U_x, V), is bijective for every x and V.
CheckReport check_unit_germs(const PrePseudogroup& c, const PpgSheafification& hat);

struct Universality {
  PpgMorphism psi;             ///< built by sending germs through phi and gluing in the target
  std::size_t solutions = 0;   ///< factorizations found by enumeration, capped at 2
  CheckReport report;          ///< psi is a morphism and psi o unit = phi
};

/// For a pseudogroup sheaf d and phi: c -> d, the factorization through the
/// sheafification and the number of factorizations. NoFactorization when gluing
/// fails; EnumerationBudgetExceeded when the search exceeds the budgets.
Universality check_universality(const PrePseudogroup& c, const PpgSheafification& hat, const PrePseudogroup& d,
                                const PpgMorphism& phi, const Budgets& budgets = {});

/// For every V: the sheafification of the presheaf C(-, V) matches sheaf(-, V)
/// naturally and compatibly with both units ("iso"), and closing the unit image
/// under gluing alone already gives the selection ("compose-subsumed").
ConditionReport check_prop45(const PrePseudogroup& c, const PpgSheafification& hat);

/// f |-> its underlying map, as a morphism into the local homeomorphisms of the space.
PpgMorphism underlying_morphism(const PrePseudogroup& c, const PrePseudogroup& homeo, Dialect dialect);

}  // namespace etale
