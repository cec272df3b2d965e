#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "etale/finite_space.hpp"
#include "etale/groupoid.hpp"
#include "etale/presheaf.hpp"
#include "etale/pseudogroup.hpp"

namespace etale {

/// {"points": [int], "opens": [[int]]}, points and opens sorted.
nlohmann::json space_to_json(const FiniteSpace& space);
FiniteSpace space_from_json(const nlohmann::json& j);

/// {"space", "sections": {"U": [ids]}, "restrictions": {"U/V": {"id": "id"}}}; open keys are
/// comma-separated point labels. Missing diagonal restrictions default to the identity.
nlohmann::json presheaf_to_json(const Presheaf& p);
Presheaf presheaf_from_json(const nlohmann::json& j);

/// {"space", "homs": {"U/V": [ids]}, "compose": {"U/V/W": {"g,f": "h"}}, "incl": {"U/V": "id"},
/// "underlying": {"U/V": {"id": {"x": y}}}}. Missing hom-sets are empty; "underlying" is optional.
nlohmann::json pseudogroup_to_json(const PrePseudogroup& c, std::optional<Dialect> dialect = std::nullopt);
PrePseudogroup pseudogroup_from_json(const nlohmann::json& j);

/// {"base", "arrows", "s": {"a": x}, "t": {...}, "i": {"x": a}, "inv": {"a": b}, "comp": {"g,f": h}},
/// with optional display "names": {"a": "name"}.
nlohmann::json groupoid_to_json(const TopGroupoid& g);
TopGroupoid groupoid_from_json(const nlohmann::json& j);

enum class InstanceKind { Space, Presheaf, Pseudogroup, Groupoid };

std::string_view to_string(InstanceKind kind);

struct Instance {
  InstanceKind kind = InstanceKind::Space;
  SpacePtr space;
  Presheaf presheaf;
  PrePseudogroup pseudogroup;
  std::optional<Dialect> dialect;  ///< an explicit "dialect" field of a pseudogroup file
  TopGroupoid groupoid;
};

/// Detects the kind from the top-level keys. ParseError carries the byte offset.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Hasse diagram of the specialization order, an edge x -> y when x lies in U_y.
std::string space_dot(const FiniteSpace& space);
/// Germs as nodes over their base points, one cluster per distinct basic open [f, U].
std::string etale_dot(const Presheaf& p);
/// Base points as boxes, arrows as labelled edges from source to target.
std::string groupoid_dot(const TopGroupoid& g);

}  // namespace etale
