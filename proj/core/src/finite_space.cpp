#include "etale/finite_space.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "etale/error.hpp"

namespace etale {
namespace {

nlohmann::json labels_json(const std::vector<int>& pts) { return nlohmann::json(pts); }

std::vector<PointSet> enumerate_lattice(const std::vector<PointSet>& minimal, std::size_t budget, bool& complete) {
  std::unordered_set<PointSet, PointSetHash> seen{PointSet{}};
  std::vector<PointSet> frontier{PointSet{}};
  std::vector<PointSet> out{PointSet{}};
  complete = true;
  while (!frontier.empty()) {
    std::vector<PointSet> next;
    for (const auto& s : frontier) {
      for (const auto& m : minimal) {
        if (m.subset_of(s)) continue;
        PointSet u = s | m;
        if (seen.insert(u).second) {
          if (out.size() >= budget) {
            complete = false;
            return {};
          }
          out.push_back(u);
          next.push_back(u);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<int> labels, std::vector<PointSet> minimal, std::size_t lattice_budget)
    : labels_(std::move(labels)), minimal_(std::move(minimal)) {
  bool complete = false;
  opens_ = enumerate_lattice(minimal_, lattice_budget, complete);
  lattice_available_ = complete;
  if (lattice_available_) {
    minimal_ids_.reserve(minimal_.size());
    for (const auto& m : minimal_) minimal_ids_.push_back(open_id(m));
  }
}

FiniteSpace FiniteSpace::build(std::vector<int> points, const std::vector<std::vector<int>>& opens) {
  std::sort(points.begin(), points.end());
  if (std::adjacent_find(points.begin(), points.end()) != points.end())
    throw Error(ErrorKind::SchemaError, "duplicate point identifier", labels_json(points));
  if (points.size() > kMaxPoints) throw Error(ErrorKind::BudgetExceeded, "too many points", points.size());

  auto index = [&](int p) -> std::size_t {
    auto it = std::lower_bound(points.begin(), points.end(), p);
    if (it == points.end() || *it != p)
      throw Error(ErrorKind::UnknownPoint, "open mentions unknown point " + std::to_string(p), {{"point", p}});
    return static_cast<std::size_t>(it - points.begin());
  };

  std::vector<PointSet> family;
  for (const auto& open : opens) {
    PointSet s;
    for (int p : open) s.insert(index(p));
    family.push_back(s);
  }
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());

  const PointSet full = PointSet::prefix(points.size());
  const bool has_empty = std::binary_search(family.begin(), family.end(), PointSet{});
  const bool has_full = std::binary_search(family.begin(), family.end(), full);
  if (!has_empty || !has_full)
    throw Error(ErrorKind::MissingEmptyOrFull, has_empty ? "the full point set is not open" : "the empty set is not open",
                {{"empty", has_empty}, {"full", has_full}});

  auto to_labels = [&](const PointSet& s) {
    std::vector<int> out;
    s.for_each([&](std::size_t i) { out.push_back(points[i]); });
    return out;
  };
  for (std::size_t a = 0; a < family.size(); ++a) {
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      if (!std::binary_search(family.begin(), family.end(), family[a] | family[b]))
        throw Error(ErrorKind::NotClosedUnderUnion, "opens are not closed under union",
                    {{"A", to_labels(family[a])}, {"B", to_labels(family[b])}});
    }
  }
  for (std::size_t a = 0; a < family.size(); ++a) {
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      if (!std::binary_search(family.begin(), family.end(), family[a] & family[b]))
        throw Error(ErrorKind::NotClosedUnderIntersection, "opens are not closed under intersection",
                    {{"A", to_labels(family[a])}, {"B", to_labels(family[b])}});
    }
  }

  std::vector<PointSet> minimal(points.size(), full);
  for (const auto& s : family)
    s.for_each([&](std::size_t x) { minimal[x] &= s; });

  FiniteSpace space(std::move(points), std::move(minimal), std::max<std::size_t>(family.size(), 1));
  return space;
}

FiniteSpace FiniteSpace::from_preorder(std::vector<int> points,
                                       const std::function<bool(std::size_t, std::size_t)>& specializes) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<int> sorted;
  for (auto i : order) sorted.push_back(points[i]);

  const std::size_t n = points.size();
  std::vector<PointSet> minimal(n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x)
      if (specializes(order[x], order[y])) minimal[y].insert(x);
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!minimal[x].contains(x))
      throw Error(ErrorKind::InvalidPreorder, "specialization is not reflexive", {{"point", sorted[x]}});
  }
  for (std::size_t y = 0; y < n; ++y) {
    minimal[y].for_each([&](std::size_t x) {
      if (!minimal[x].subset_of(minimal[y]))
        throw Error(ErrorKind::InvalidPreorder, "specialization is not transitive",
                    {{"x", sorted[x]}, {"y", sorted[y]}});
    });
  }
  return FiniteSpace(std::move(sorted), std::move(minimal), Budgets{}.open_lattice);
}

FiniteSpace FiniteSpace::from_minimal_opens(std::vector<int> labels, std::vector<PointSet> minimal,
                                            std::size_t lattice_budget) {
  if (labels.size() != minimal.size() || labels.size() > kMaxPoints)
    throw Error(ErrorKind::SchemaError, "one minimal open per point is required");
  for (std::size_t x = 0; x < minimal.size(); ++x) {
    if (!minimal[x].contains(x))
      throw Error(ErrorKind::InvalidPreorder, "minimal open misses its point", {{"point", labels[x]}});
    minimal[x].for_each([&](std::size_t y) {
      if (y >= labels.size() || !minimal[y].subset_of(minimal[x]))
        throw Error(ErrorKind::InvalidPreorder, "minimal opens are not nested", {{"x", labels[x]}});
    });
  }
  return FiniteSpace(std::move(labels), std::move(minimal), lattice_budget);
}

FiniteSpace FiniteSpace::discrete(std::size_t n) {
  std::vector<int> labels(n);
  std::vector<PointSet> minimal(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(i);
    minimal[i] = PointSet::singleton(i);
  }
  return FiniteSpace(std::move(labels), std::move(minimal), Budgets{}.open_lattice);
}

FiniteSpace FiniteSpace::indiscrete(std::size_t n) {
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
  return FiniteSpace(std::move(labels), std::vector<PointSet>(n, PointSet::prefix(n)), Budgets{}.open_lattice);
}

FiniteSpace FiniteSpace::chain(std::size_t n) {
  std::vector<int> labels(n);
  std::vector<PointSet> minimal(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(i);
    for (std::size_t j = i; j < n; ++j) minimal[i].insert(j);
  }
  return FiniteSpace(std::move(labels), std::move(minimal), Budgets{}.open_lattice);
}

std::size_t FiniteSpace::index_of(int label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw Error(ErrorKind::UnknownPoint, "unknown point " + std::to_string(label), {{"point", label}});
  return static_cast<std::size_t>(it - labels_.begin());
}

bool FiniteSpace::is_open(const PointSet& s) const {
  if (!s.subset_of(all())) return false;
  bool open = true;
  s.for_each([&](std::size_t y) { open = open && minimal_[y].subset_of(s); });
  return open;
}

bool FiniteSpace::is_t1() const {
  for (std::size_t x = 0; x < size(); ++x)
    if (minimal_[x].size() != 1) return false;
  return true;
}

const std::vector<PointSet>& FiniteSpace::opens() const {
  if (!lattice_available_)
    throw Error(ErrorKind::BudgetExceeded, "open lattice exceeds the materialization budget", {{"points", size()}});
  return opens_;
}

OpenId FiniteSpace::open_id(const PointSet& u) const {
  const auto& all_opens = opens();
  auto it = std::lower_bound(all_opens.begin(), all_opens.end(), u);
  if (it == all_opens.end() || !(*it == u))
    throw Error(ErrorKind::NotOpen, "subset is not open", {{"subset", to_labels(u)}});
  return static_cast<OpenId>(it - all_opens.begin());
}

std::vector<int> FiniteSpace::to_labels(const PointSet& s) const {
  std::vector<int> out;
  s.for_each([&](std::size_t i) { out.push_back(labels_[i]); });
  return out;
}

PointSet FiniteSpace::from_labels(const std::vector<int>& labels) const {
  PointSet s;
  for (int l : labels) s.insert(index_of(l));
  return s;
}

std::string FiniteSpace::key(const PointSet& s) const {
  std::string out;
  bool first = true;
  s.for_each([&](std::size_t i) {
    if (!first) out += ',';
    out += std::to_string(labels_[i]);
    first = false;
  });
  return out;
}

PointSet FiniteSpace::from_key(const std::string& key) const {
  PointSet s;
  if (key.empty()) return s;
  std::stringstream in(key);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      s.insert(index_of(std::stoi(part)));
    } catch (const std::invalid_argument&) {
      throw Error(ErrorKind::SchemaError, "malformed open key '" + key + "'", {{"key", key}});
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

PointMap::PointMap(SpacePtr domain_space, PointSet domain, SpacePtr codomain_space, PointSet codomain,
                   std::vector<std::size_t> values)
    : domain_space_(std::move(domain_space)),
      domain_(domain),
      codomain_space_(std::move(codomain_space)),
      codomain_(codomain),
      values_(std::move(values)) {
  if (!domain_space_->is_open(domain_) || !codomain_space_->is_open(codomain_))
    throw Error(ErrorKind::NotOpen, "point maps are only defined between open subspaces");
  if (values_.size() != domain_space_->size()) throw Error(ErrorKind::InvalidMap, "assignment has the wrong length");
  domain_.for_each([&](std::size_t x) {
    if (values_[x] >= codomain_space_->size() || !codomain_.contains(values_[x]))
      throw Error(ErrorKind::InvalidMap, "value outside the codomain", {{"point", domain_space_->label(x)}});
  });
}

PointMap PointMap::identity(const SpacePtr& space, const PointSet& u) { return inclusion(space, u, u); }

PointMap PointMap::inclusion(const SpacePtr& space, const PointSet& u, const PointSet& v) {
  std::vector<std::size_t> values(space->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = i;
  return PointMap(space, u, space, v, std::move(values));
}

PointSet PointMap::image(const PointSet& s) const {
  PointSet out;
  (s & domain_).for_each([&](std::size_t x) { out.insert(values_[x]); });
  return out;
}

PointMap PointMap::restricted(const PointSet& u) const {
  return PointMap(domain_space_, u, codomain_space_, codomain_, values_);
}

PointMap PointMap::after(const PointMap& f) const {
  std::vector<std::size_t> composed(f.domain_space_->size(), 0);
  f.domain_.for_each([&](std::size_t x) { composed[x] = values_[f.values_[x]]; });
  return PointMap(f.domain_space_, f.domain_, codomain_space_, codomain_, std::move(composed));
}

std::vector<std::size_t> PointMap::values() const {
  std::vector<std::size_t> out;
  domain_.for_each([&](std::size_t x) { out.push_back(values_[x]); });
  return out;
}

bool operator==(const PointMap& a, const PointMap& b) {
  return *a.domain_space_ == *b.domain_space_ && *a.codomain_space_ == *b.codomain_space_ &&
         a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.values() == b.values();
}

ContinuityResult check_continuous(const PointMap& map) {
  // Between Alexandrov spaces continuity is f(U_x) within U_{f(x)} for every x.
  ContinuityResult result;
  const auto& dom = map.domain_space();
  const auto& cod = map.codomain_space();
  for (std::size_t x : map.domain().elements()) {
    const PointSet& target = cod.minimal_open(map(x));
    if (!map.image(dom.minimal_open(x)).subset_of(target)) {
      result.ok = false;
      result.violating_open = target;
      result.at_point = x;
      return result;
    }
  }
  return result;
}

LocalHomeoResult is_local_homeo(const PointMap& map) {
  LocalHomeoResult result;
  const auto& dom = map.domain_space();
  const auto& cod = map.codomain_space();
  for (std::size_t x : map.domain().elements()) {
    const PointSet& nbhd = dom.minimal_open(x);
    bool good = map.image(nbhd).subset_of(cod.minimal_open(map(x)));
    if (!good) result.continuous = false;
    // If any open neighbourhood works, U_x does; check injectivity, openness of
    // the image and continuity of the inverse on U_x.
    const auto pts = nbhd.elements();
    for (std::size_t i = 0; good && i < pts.size(); ++i) {
      for (std::size_t j = 0; good && j < pts.size(); ++j) {
        if (i != j && map(pts[i]) == map(pts[j])) good = false;
        if (cod.specializes(map(pts[i]), map(pts[j])) && !dom.specializes(pts[i], pts[j])) good = false;
      }
    }
    if (good && !cod.is_open(map.image(nbhd))) good = false;
    if (!good) result.failing_points.push_back(x);
  }
  result.ok = result.failing_points.empty();
  return result;
}

bool is_homeomorphism(const PointMap& map) {
  const auto& dom = map.domain_space();
  const auto& cod = map.codomain_space();
  if (!(map.image(map.domain()) == map.codomain()) || map.domain().size() != map.codomain().size()) return false;
  const auto pts = map.domain().elements();
  for (std::size_t a : pts) {
    for (std::size_t b : pts) {
      if (dom.specializes(a, b) != cod.specializes(map(a), map(b))) return false;
    }
  }
  return true;
}

std::vector<std::vector<PointSet>> enumerate_covers(const FiniteSpace& space, const PointSet& u, CoverMode mode,
                                                    const Budgets& budgets) {
  if (!space.is_open(u)) throw Error(ErrorKind::NotOpen, "covers are only enumerated for opens");
  if (mode == CoverMode::Canonical) {
    std::vector<PointSet> cover;
    u.for_each([&](std::size_t x) { cover.push_back(space.minimal_open(x)); });
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    return {cover};
  }
  if (space.open_count() > budgets.cover_opens)
    throw Error(ErrorKind::CoverBudgetExceeded, "irredundant cover enumeration exceeds the budget",
                {{"opens", space.open_count()}, {"budget", budgets.cover_opens}});
  std::vector<PointSet> candidates;
  for (const auto& w : space.opens())
    if (!w.empty() && w.subset_of(u)) candidates.push_back(w);
  std::vector<std::vector<PointSet>> covers;
  const std::size_t k = candidates.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<PointSet> cover;
    PointSet total;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1U) {
        cover.push_back(candidates[i]);
        total |= candidates[i];
      }
    }
    if (!(total == u)) continue;
    bool irredundant = true;
    for (std::size_t i = 0; i < cover.size() && irredundant; ++i) {
      PointSet others;
      for (std::size_t j = 0; j < cover.size(); ++j)
        if (j != i) others |= cover[j];
      if (cover[i].subset_of(others)) irredundant = false;
    }
    if (irredundant) covers.push_back(std::move(cover));
  }
  return covers;
}

}  // namespace etale
