#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "etale/budget.hpp"
#include "etale/error.hpp"
#include "etale/finite_space.hpp"
#include "etale/presheaf.hpp"

namespace etale {

/// Index of a morphism inside homs(U, V).
using HomId = std::uint32_t;

/// How germ targets are read off: from limits over neighbourhoods (T1) or from
/// a stored underlying functor into local homeomorphisms (NonT1).
enum class Dialect { T1, NonT1 };

std::string_view to_string(Dialect d);

/// Raw tables of a small category whose objects are the opens of a space.
struct PrePseudogroupData {
  SpacePtr space;
  /// homs[u * n + v]: opaque morphism identifiers.
  std::vector<std::vector<std::string>> homs;
  /// compose[(u * n + v) * n + w][g * |homs(u, v)| + f] = g o f, for g in homs(v, w), f in homs(u, v).
  std::vector<std::vector<HomId>> compose;
  /// incl[u * n + v], expected exactly when u lies in v.
  std::vector<std::optional<HomId>> incl;
  /// underlying[u * n + v][f]: image of each point of u, ascending.
  std::optional<std::vector<std::vector<std::vector<std::size_t>>>> underlying;
};

class PrePseudogroup {
 public:
  using ComposeFn = std::function<HomId(OpenId u, OpenId v, OpenId w, HomId g, HomId f)>;
  using UnderlyingFn = std::function<std::vector<std::size_t>(OpenId u, OpenId v, HomId f)>;

  PrePseudogroup() = default;
  /// Checks table shapes only; the axioms are the business of the check_* functions.
  explicit PrePseudogroup(PrePseudogroupData data);

  static PrePseudogroup generate(SpacePtr space, std::vector<std::vector<std::string>> homs, const ComposeFn& compose,
                                 std::vector<std::optional<HomId>> incl, const UnderlyingFn& underlying = {});

  const PrePseudogroupData& data() const { return data_; }
  const FiniteSpace& space() const { return *data_.space; }
  const SpacePtr& space_ptr() const { return data_.space; }
  std::size_t open_count() const { return n_; }

  const std::vector<std::string>& homs(OpenId u, OpenId v) const { return data_.homs[u * n_ + v]; }
  std::size_t hom_size(OpenId u, OpenId v) const { return data_.homs[u * n_ + v].size(); }
  HomId compose(OpenId u, OpenId v, OpenId w, HomId g, HomId f) const {
    return data_.compose[(u * n_ + v) * n_ + w][g * hom_size(u, v) + f];
  }
  std::optional<HomId> incl(OpenId u, OpenId v) const { return data_.incl[u * n_ + v]; }
  /// incl(u, v), throwing SchemaError when the embedding is incomplete.
  HomId inclusion(OpenId u, OpenId v) const;
  /// f o incl(u2, u) for f in homs(u, v).
  HomId restrict(OpenId u, OpenId v, OpenId u2, HomId f) const { return compose(u2, u, v, f, inclusion(u2, u)); }
  /// incl(v, v2) o f for f in homs(u, v).
  HomId extend(OpenId u, OpenId v, OpenId v2, HomId f) const { return compose(u, v, v2, inclusion(v, v2), f); }

  bool has_underlying() const { return data_.underlying.has_value(); }
  PointMap stored_underlying(OpenId u, OpenId v, HomId f) const;
  std::optional<HomId> find(OpenId u, OpenId v, const std::string& label) const;

 private:
  PrePseudogroupData data_;
  std::size_t n_ = 0;
};

/// C(-, V) as a presheaf, restricting by precomposition with inclusions.
Presheaf hom_presheaf(const PrePseudogroup& c, OpenId v);

/// Identity laws and associativity ("category") plus the embedding of the open lattice ("(1)").
ConditionReport check_category(const PrePseudogroup& c);

/// Germ classification: for each point x, open V and a in homs(U_x, V), the unique y
/// in V with a in the image of C_x^y = homs(U_x, U_y) under postcomposition.
struct GermDecomposition {
  std::vector<std::vector<std::optional<std::size_t>>> target;  ///< [x * opens + v][a]
  std::vector<std::vector<HomId>> rep;                          ///< [x * opens + v][a], in homs(U_x, U_y)
  CheckReport report;

  bool ok() const { return report.violations.empty(); }
};

GermDecomposition decompose(const PrePseudogroup& c);

struct DecompositionResult {
  bool ok = true;
  nlohmann::json witness;
};

/// Disjoint, exhaustive, injective decomposition of C_x(V) into the C_x^y, y in V.
DecompositionResult check_decomposition(const PrePseudogroup& c);

/// C_x(V) = homs(U_x, V): the colimit over neighbourhoods is attained at U_x.
const std::vector<std::string>& germ_hom(const PrePseudogroup& c, std::size_t x, OpenId v);

struct GermTargetHom {
  OpenId source_open = 0;          ///< U_x
  OpenId target_open = 0;          ///< U_y (T1) or X (NonT1)
  std::vector<HomId> elements;     ///< inside homs(source_open, target_open)
  std::vector<HomId> in_total;     ///< the same germs inside C_x(X)
};

GermTargetHom germ_target_hom(const PrePseudogroup& c, std::size_t x, std::size_t y, Dialect dialect);

/// General inverse-limit realization of C_x^y: compatible families (a_V) over all
/// opens V containing y, a_V in homs(U_x, V). Exists to cross-check the attained limit.
struct LimitGerms {
  std::vector<OpenId> index_opens;                 ///< opens containing y, ascending by size
  std::vector<std::vector<HomId>> families;        ///< one entry per index open
};

LimitGerms inverse_limit_germs(const PrePseudogroup& c, std::size_t x, std::size_t y,
                               const Budgets& budgets = {});

/// Underlying point maps of every morphism: derived from germ classification (T1)
/// or read from the stored functor (NonT1).
struct UnderlyingFunctor {
  std::vector<std::vector<PointMap>> maps;  ///< [u * n + v][f]
  const PointMap& operator()(std::size_t slot, HomId f) const { return maps[slot][f]; }
};

UnderlyingFunctor underlying_functor(const PrePseudogroup& c, Dialect dialect);
PointMap underlying_map(const PrePseudogroup& c, OpenId u, OpenId v, HomId f, Dialect dialect);

/// Functor laws, inclusion compatibility, and that every map is a local homeomorphism.
CheckReport check_underlying_functor(const PrePseudogroup& c, const UnderlyingFunctor& functor);

struct GermArrow {
  std::size_t source = 0;
  std::size_t target = 0;
  HomId rep = 0;   ///< in homs(U_source, U_target)
  HomId germ = 0;  ///< incl(U_target, X) o rep, in homs(U_source, X)
};

/// The category C*: points as objects, germs as arrows. T1 takes C*(x, y) = homs(U_x, U_y)
/// literally; NonT1 takes the germs in homs(U_x, X) whose underlying map sends x to y,
/// each represented by its unique factor through U_y.
struct GermGroupoid {
  Dialect dialect = Dialect::T1;
  std::size_t points = 0;
  std::vector<GermArrow> arrows;
  /// Arrows x -> y occupy [first_arrow[x * points + y], first_arrow[x * points + y + 1]).
  std::vector<std::size_t> first_arrow;
  /// rep_index[x * points + y][rep]: arrow x -> y with that representative.
  std::vector<std::vector<std::optional<std::size_t>>> rep_index;
  /// by_germ[x][germ]: the arrow with that germ, unset when absent or ambiguous.
  std::vector<std::vector<std::optional<std::size_t>>> by_germ;
  std::vector<std::size_t> identity;
  std::vector<std::optional<std::size_t>> composition;  ///< [g * arrows + f] when source(g) = target(f)
  std::vector<std::optional<std::size_t>> inverse;
  CheckReport category_report;
  CheckReport groupoid_report;

  std::size_t begin(std::size_t x, std::size_t y) const { return first_arrow[x * points + y]; }
  std::size_t end(std::size_t x, std::size_t y) const { return first_arrow[x * points + y + 1]; }
  /// Arrows with source x occupy [begin(x, 0), end(x, points - 1)).
  std::size_t source_begin(std::size_t x) const { return first_arrow[x * points]; }
  std::size_t source_end(std::size_t x) const { return first_arrow[(x + 1) * points]; }
  std::optional<std::size_t> arrow_for(std::size_t x, std::size_t y, HomId rep) const {
    const auto& idx = rep_index[x * points + y];
    return rep < idx.size() ? idx[rep] : std::nullopt;
  }
  std::optional<std::size_t> compose(std::size_t g, std::size_t f) const {
    return composition[g * arrows.size() + f];
  }
  bool is_groupoid() const { return category_report.ok() && groupoid_report.ok(); }
};

/// Builds C* and checks the category axioms; invertibility is reported, not required.
GermGroupoid germ_category(const PrePseudogroup& c, Dialect dialect);
/// As germ_category, throwing NotAGroupoid with a non-invertible arrow as witness.
GermGroupoid build_germ_groupoid(const PrePseudogroup& c, Dialect dialect);

/// Germ of (g o f) at x equals the C*-composite of the germs of g at f(x) and f at x,
/// for every composable pair and every point.
CheckReport check_germ_composition(const PrePseudogroup& c, Dialect dialect);

/// Conditions (1)-(3) of the pre-pseudogroup definition in the chosen dialect.
/// T1 on a non-T1 space throws NotT1Space; NonT1 without a stored functor throws MissingUnderlying.
ConditionReport check_pre_pseudogroup(const PrePseudogroup& c, Dialect dialect);
/// Adds condition (4): every C(-, V) is a sheaf.
ConditionReport is_pseudogroup_sheaf(const PrePseudogroup& c, Dialect dialect, const Budgets& budgets = {});

/// Literal evaluation of conditions (1)-(4) on any space: (2) is the coproduct
/// decomposition; (3) uses limit germs on T1 spaces and the stored underlying functor
/// elsewhere (SuiteUnavailable without one).
ConditionReport def21_conditions(const PrePseudogroup& c, const Budgets& budgets = {});

/// Local homeomorphisms between opens, composed as maps, with the stored underlying functor.
PrePseudogroup build_homeo_l(const SpacePtr& space);

struct GroupTable {
  std::vector<std::vector<std::size_t>> mul;
  std::size_t identity = 0;
  std::vector<std::size_t> inverse;

  std::size_t order() const { return mul.size(); }
};

/// A presheaf with a group structure on every section set.
struct GroupSheafInput {
  Presheaf presheaf;
  std::vector<GroupTable> groups;  ///< one per open
};

/// Group axioms at every open and restrictions as homomorphisms.
CheckReport check_group_presheaf(const GroupSheafInput& g);

/// C(U, V) = F(U) when U lies in V and empty otherwise; g o f = res(g) * f in F(U);
/// incl(U, V) is the identity of F(U); underlying maps are the inclusions.
PrePseudogroup from_group_sheaf(const GroupSheafInput& g);

/// The underlying-map functor is injective on every hom-set.
bool is_concrete(const PrePseudogroup& c, Dialect dialect);

/// Keeps the marked morphisms; nullopt when the result is not closed under
/// composition or drops an inclusion.
std::optional<PrePseudogroup> subcategory(const PrePseudogroup& c,
                                          const std::function<bool(OpenId, OpenId, HomId)>& keep);

}  // namespace etale
