#pragma once

#include <vector>

#include "etale/error.hpp"
#include "etale/finite_space.hpp"
#include "etale/pseudogroup.hpp"

namespace etale {

/// Partial homeomorphisms between opens, each map's codomain being its image.
struct ClassicalPseudogroup {
  SpacePtr space;
  std::vector<PointMap> maps;

  bool contains(const PointMap& f) const;
};

/// Identities, inverses, composites on the largest possible domain, restrictions,
/// and the gluing property over canonical covers.
CheckReport check_classical(const ClassicalPseudogroup& h);

/// Underlying maps of the invertible morphisms; NotConcrete unless faithful.
ClassicalPseudogroup classical_pseudogroup(const PrePseudogroup& c, Dialect dialect);

/// homs(U, V) = maps of h defined on U with image in V, then sheafified.
/// NotAPseudogroup when h fails check_classical; NotT1Space off T1 spaces.
PrePseudogroup classical_to_concrete(const ClassicalPseudogroup& h);

/// Smallest classical pseudogroup containing the generators and every identity.
ClassicalPseudogroup classical_closure(const SpacePtr& space, const std::vector<PointMap>& generators);

}  // namespace etale
