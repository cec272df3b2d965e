#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "etale/budget.hpp"
#include "etale/error.hpp"
#include "etale/finite_space.hpp"

namespace etale {

/// Index of a section inside sections(U).
using SectionId = std::size_t;

/// A presheaf of finite sets on the open lattice of a finite space.
///
/// Restrictions are stored for every pair U' within U, so malformed raw data
/// (non-identity diagonals, non-functorial composites) stays representable and
/// is reported by check_presheaf.
class Presheaf {
 public:
  using RestrictFn = std::function<SectionId(OpenId from, OpenId to, SectionId s)>;

  Presheaf() = default;
  /// restrictions[from * open_count + to] for every to within from; other slots empty.
  Presheaf(SpacePtr space, std::vector<std::vector<std::string>> sections,
           std::vector<std::vector<SectionId>> restrictions);

  static Presheaf from_function(SpacePtr space, std::vector<std::vector<std::string>> sections, const RestrictFn& fn);

  const FiniteSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::size_t open_count() const { return sections_.size(); }

  const std::vector<std::string>& sections(OpenId u) const { return sections_[u]; }
  std::size_t section_count(OpenId u) const { return sections_[u].size(); }
  SectionId restrict(OpenId from, OpenId to, SectionId s) const { return restrictions_[slot(from, to)][s]; }
  const std::vector<SectionId>& restriction(OpenId from, OpenId to) const { return restrictions_[slot(from, to)]; }
  std::optional<SectionId> find(OpenId u, const std::string& label) const;

  /// Raw tables, for serialization and for deliberately broken test fixtures.
  const std::vector<std::vector<std::string>>& section_table() const { return sections_; }
  const std::vector<std::vector<SectionId>>& restriction_table() const { return restrictions_; }

 private:
  std::size_t slot(OpenId from, OpenId to) const { return from * sections_.size() + to; }

  SpacePtr space_;
  std::vector<std::vector<std::string>> sections_;
  std::vector<std::vector<SectionId>> restrictions_;
};

/// Per-open component maps between two presheaves on the same space.
struct PresheafMorphism {
  std::vector<std::vector<SectionId>> components;

  SectionId operator()(OpenId u, SectionId s) const { return components[u][s]; }
  static PresheafMorphism identity(const Presheaf& p);
};

struct Germ {
  std::size_t point = 0;
  SectionId value = 0;  ///< element of sections(U_point)
};

/// The bundle of germs of a presheaf with the topology generated by the basic sets [f, U].
struct EtaleSpaceBundle {
  SpacePtr total;
  std::vector<Germ> germs;                      ///< germs[i] describes total point i
  std::vector<std::size_t> first_germ;          ///< offset of the germs over each base point
  PointMap projection;

  std::size_t germ_index(std::size_t point, SectionId value) const { return first_germ[point] + value; }
};

enum class SheafMode { Canonical, Exhaustive };

struct SheafWitness {
  PointSet open;
  std::vector<PointSet> cover;
  std::vector<SectionId> family;  ///< one section per cover member
  std::size_t gluings = 0;        ///< 0 = no gluing, >1 = gluing not unique
};

struct SheafResult {
  bool ok = true;
  std::optional<SheafWitness> witness;
};

CheckReport check_presheaf(const Presheaf& p);
CheckReport check_presheaf_morphism(const Presheaf& source, const Presheaf& target, const PresheafMorphism& phi);

SheafResult is_sheaf(const Presheaf& p, SheafMode mode = SheafMode::Canonical, const Budgets& budgets = {});
nlohmann::json to_json(const FiniteSpace& space, const SheafWitness& w);

/// Stalk at x; the colimit over neighbourhoods is attained at U_x.
const std::vector<std::string>& stalk(const Presheaf& p, std::size_t x);
/// Germ of a section s in sections(U) at a point x of U.
SectionId germ_at(const Presheaf& p, OpenId u, SectionId s, std::size_t x);

EtaleSpaceBundle etale_space(const Presheaf& p);
/// [f, U] = { germ of f at x : x in U }.
PointSet basic_open(const Presheaf& p, const EtaleSpaceBundle& bundle, OpenId u, SectionId f);

inline const std::string kSkyscraperSentinel = "•";

Presheaf skyscraper(const SpacePtr& space, std::size_t x, const std::vector<std::string>& stalk_set);
Presheaf product_presheaf(const SpacePtr& space, const std::vector<Presheaf>& factors);

/// Sheafification as the gluing closure of the image of p inside the product of
/// skyscrapers of its stalks. Families are stored sparsely: one stalk element
/// per point of U, the coordinates outside U being the implicit sentinel.
struct Sheafification {
  Presheaf sheaf;
  PresheafMorphism unit;
  std::vector<std::vector<std::vector<SectionId>>> families;  ///< families[u][k] for section k of sheaf(u)
  std::size_t passes = 0;
};

Sheafification sheafify(const Presheaf& p);

/// The unit is a bijection on every stalk.
CheckReport check_unit_stalks(const Presheaf& p, const Sheafification& hat);

/// The full product of the skyscrapers of p's stalks, in the sparse layout used by sheafify.
Presheaf sharp_presheaf(const Presheaf& p);

struct StalkIsoResult {
  bool stalkwise_iso = true;
  bool openwise_iso = true;
  std::optional<std::size_t> failing_point;
  std::optional<OpenId> failing_open;
};

/// Both presheaves must be sheaves (NotASheaf otherwise).
StalkIsoResult check_morphism_stalkwise_iso(const Presheaf& source, const Presheaf& target,
                                            const PresheafMorphism& phi, const Budgets& budgets = {});

struct PresheafUniversality {
  PresheafMorphism psi;       ///< constructed by gluing images of germs
  std::size_t solutions = 0;  ///< morphisms with psi o unit = phi found by enumeration, capped at 2
  bool exhausted = true;      ///< false when the search hit the node budget
};

/// For a sheaf g and a morphism phi: p -> g, constructs the factorization through
/// the sheafification and counts all factorizations by bounded enumeration.
PresheafUniversality check_presheaf_universality(const Presheaf& p, const Sheafification& hat, const Presheaf& g,
                                                 const PresheafMorphism& phi, const Budgets& budgets = {});

}  // namespace etale
