#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etale/budget.hpp"
#include "etale/point_set.hpp"

namespace etale {

/// Index of an open set in a space's canonical open lattice.
using OpenId = std::size_t;

/// A finite topological space.
///
/// Points carry integer labels and are addressed internally by their index in
/// ascending label order. The topology is held as the family of minimal open
/// neighbourhoods U_x; the full lattice of opens is materialized eagerly in
/// canonical (lexicographic) order whenever it fits the lattice budget.
class FiniteSpace {
 public:
  /// Validates the topology axioms on an explicit family of opens.
  static FiniteSpace build(std::vector<int> points, const std::vector<std::vector<int>>& opens);

  /// specializes(x, y) over point indices means x -> y, i.e. x lies in U_y.
  static FiniteSpace from_preorder(std::vector<int> points,
                                   const std::function<bool(std::size_t, std::size_t)>& specializes);

  /// Labels are taken in the given order. Requires x in U_x and U_y within U_x for y in U_x.
  static FiniteSpace from_minimal_opens(std::vector<int> labels, std::vector<PointSet> minimal,
                                        std::size_t lattice_budget = Budgets{}.open_lattice);

  static FiniteSpace discrete(std::size_t n);
  static FiniteSpace indiscrete(std::size_t n);
  /// Opens are the suffixes {k, ..., n-1}; chain(2) is the Sierpinski space.
  static FiniteSpace chain(std::size_t n);
  /// Points {0, 1}, opens {}, {1}, {0, 1}.
  static FiniteSpace sierpinski() { return chain(2); }

  std::size_t size() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  std::size_t index_of(int label) const;
  PointSet all() const { return PointSet::prefix(size()); }

  const PointSet& minimal_open(std::size_t x) const { return minimal_[x]; }
  /// x -> y: every open containing y contains x.
  bool specializes(std::size_t x, std::size_t y) const { return minimal_[y].contains(x); }
  bool is_open(const PointSet& s) const;
  bool is_t1() const;

  bool has_open_lattice() const { return lattice_available_; }
  const std::vector<PointSet>& opens() const;
  std::size_t open_count() const { return opens().size(); }
  OpenId open_id(const PointSet& u) const;
  OpenId minimal_open_id(std::size_t x) const { return minimal_ids_.at(x); }
  OpenId full_id() const { return open_id(all()); }
  OpenId empty_id() const { return 0; }
  const PointSet& open(OpenId id) const { return opens()[id]; }

  std::vector<int> to_labels(const PointSet& s) const;
  PointSet from_labels(const std::vector<int>& labels) const;
  /// Canonical key of a subset: comma-separated ascending labels, "" for the empty set.
  std::string key(const PointSet& s) const;
  PointSet from_key(const std::string& key) const;

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.labels_ == b.labels_ && a.minimal_ == b.minimal_;
  }

 private:
  FiniteSpace(std::vector<int> labels, std::vector<PointSet> minimal, std::size_t lattice_budget);

  std::vector<int> labels_;
  std::vector<PointSet> minimal_;
  bool lattice_available_ = false;
  std::vector<PointSet> opens_;
  std::vector<OpenId> minimal_ids_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

inline SpacePtr share(FiniteSpace space) { return std::make_shared<const FiniteSpace>(std::move(space)); }

/// Total function between two open subspaces, possibly of different spaces.
class PointMap {
 public:
  PointMap() = default;
  /// values is indexed by domain-space point index; entries outside the domain are ignored.
  PointMap(SpacePtr domain_space, PointSet domain, SpacePtr codomain_space, PointSet codomain,
           std::vector<std::size_t> values);

  static PointMap identity(const SpacePtr& space, const PointSet& u);
  static PointMap inclusion(const SpacePtr& space, const PointSet& u, const PointSet& v);

  const FiniteSpace& domain_space() const { return *domain_space_; }
  const FiniteSpace& codomain_space() const { return *codomain_space_; }
  const SpacePtr& domain_space_ptr() const { return domain_space_; }
  const SpacePtr& codomain_space_ptr() const { return codomain_space_; }
  const PointSet& domain() const { return domain_; }
  const PointSet& codomain() const { return codomain_; }

  std::size_t operator()(std::size_t x) const { return values_[x]; }
  PointSet image(const PointSet& s) const;
  /// Restriction to a smaller open domain.
  PointMap restricted(const PointSet& u) const;
  /// (*this) after f; f's codomain must lie inside this map's domain.
  PointMap after(const PointMap& f) const;

  /// Assignment restricted to the domain, in ascending domain order.
  std::vector<std::size_t> values() const;

  friend bool operator==(const PointMap& a, const PointMap& b);

 private:
  SpacePtr domain_space_;
  PointSet domain_;
  SpacePtr codomain_space_;
  PointSet codomain_;
  std::vector<std::size_t> values_;
};

struct ContinuityResult {
  bool ok = true;
  /// Open of the codomain whose preimage is not open.
  std::optional<PointSet> violating_open;
  std::optional<std::size_t> at_point;
};

struct LocalHomeoResult {
  bool ok = true;
  bool continuous = true;
  /// Every domain point without a neighbourhood mapped homeomorphically onto an open.
  std::vector<std::size_t> failing_points;
};

ContinuityResult check_continuous(const PointMap& map);
LocalHomeoResult is_local_homeo(const PointMap& map);
/// Bijective, continuous, with continuous inverse.
bool is_homeomorphism(const PointMap& map);

enum class CoverMode { Canonical, Irredundant };

/// Canonical: the single cover {U_x : x in U}. Irredundant: every cover of U by
/// opens in which no member lies in the union of the others.
std::vector<std::vector<PointSet>> enumerate_covers(const FiniteSpace& space, const PointSet& u, CoverMode mode,
                                                    const Budgets& budgets = {});

}  // namespace etale
