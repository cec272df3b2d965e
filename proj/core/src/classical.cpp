#include "etale/classical.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "etale/ppg_sheafify.hpp"

namespace etale {
namespace {

constexpr std::size_t kReportCap = 16;

void add_capped(CheckReport& r, const std::string& check, const std::string& message, nlohmann::json witness) {
  if (r.violations.size() < kReportCap) r.add(check, message, std::move(witness));
}

using MapKey = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

MapKey key_of(const PointMap& f) { return {f.domain().elements(), f.values()}; }

std::string map_label(const PointMap& f) {
  const auto& space = f.domain_space();
  std::string out = "[";
  bool first = true;
  f.domain().for_each([&](std::size_t x) {
    if (!first) out += ';';
    first = false;
    out += std::to_string(space.label(x)) + '>' + std::to_string(space.label(f(x)));
  });
  return out + "]";
}

nlohmann::json map_json(const PointMap& f) {
  nlohmann::json out = nlohmann::json::object();
  const auto& space = f.domain_space();
  f.domain().for_each([&](std::size_t x) { out[std::to_string(space.label(x))] = space.label(f(x)); });
  return out;
}

PointMap onto_image(const SpacePtr& space, const PointSet& domain, const std::vector<std::size_t>& values) {
  PointSet image;
  domain.for_each([&](std::size_t x) { image.insert(values[x]); });
  return PointMap(space, domain, space, image, values);
}

std::vector<std::size_t> full_values(const PointMap& f) {
  std::vector<std::size_t> values(f.domain_space().size(), 0);
  f.domain().for_each([&](std::size_t x) { values[x] = f(x); });
  return values;
}

PointMap inverse_of(const PointMap& f) {
  std::vector<std::size_t> values(f.domain_space().size(), 0);
  f.domain().for_each([&](std::size_t x) { values[f(x)] = x; });
  return PointMap(f.domain_space_ptr(), f.codomain(), f.domain_space_ptr(), f.domain(), values);
}

/// g after f on the points of f's domain that land in g's domain.
std::optional<PointMap> composite(const PointMap& g, const PointMap& f) {
  PointSet domain;
  f.domain().for_each([&](std::size_t x) {
    if (g.domain().contains(f(x))) domain.insert(x);
  });
  const auto& space = f.domain_space_ptr();
  if (!space->is_open(domain)) return std::nullopt;
  std::vector<std::size_t> values(space->size(), 0);
  domain.for_each([&](std::size_t x) { values[x] = g(f(x)); });
  return onto_image(space, domain, values);
}

/// Homeomorphisms from the open u onto opens of the same size.
std::vector<PointMap> homeomorphisms_from(const SpacePtr& space, const PointSet& u) {
  std::vector<PointMap> out;
  const auto pts = u.elements();
  for (const auto& target : space->opens()) {
    if (target.size() != pts.size()) continue;
    auto image = target.elements();
    do {
      std::vector<std::size_t> values(space->size(), 0);
      for (std::size_t i = 0; i < pts.size(); ++i) values[pts[i]] = image[i];
      PointMap f(space, u, space, target, values);
      if (is_homeomorphism(f)) out.push_back(std::move(f));
    } while (std::next_permutation(image.begin(), image.end()));
  }
  return out;
}

}  // namespace

bool ClassicalPseudogroup::contains(const PointMap& f) const {
  return std::any_of(maps.begin(), maps.end(), [&](const PointMap& g) { return key_of(g) == key_of(f); });
}

CheckReport check_classical(const ClassicalPseudogroup& h) {
  CheckReport out;
  const auto& space = *h.space;
  std::set<MapKey> members;
  for (const auto& f : h.maps) {
    members.insert(key_of(f));
    if (!space.is_open(f.domain()) || !space.is_open(f.codomain()) || !is_homeomorphism(f))
      add_capped(out, "homeomorphism", "not a homeomorphism between opens", map_json(f));
  }
  if (!out.ok()) return out;
  auto has = [&](const PointMap& f) { return members.count(key_of(f)) > 0; };
  for (const auto& u : space.opens())
    if (!has(PointMap::identity(h.space, u)))
      add_capped(out, "identity", "identity of an open missing", space.to_labels(u));
  for (const auto& f : h.maps) {
    if (!has(inverse_of(f))) add_capped(out, "inverse", "inverse missing", map_json(f));
    for (const auto& u : space.opens())
      if (u.subset_of(f.domain()) && !has(onto_image(h.space, u, full_values(f))))
        add_capped(out, "restriction", "restriction missing", {{"map", map_json(f)}, {"to", space.to_labels(u)}});
    for (const auto& g : h.maps) {
      const auto gf = composite(g, f);
      if (gf && !has(*gf)) add_capped(out, "composition", "composite missing", {{"g", map_json(g)}, {"f", map_json(f)}});
    }
  }
  for (const auto& u : space.opens())
    for (const auto& f : homeomorphisms_from(h.space, u)) {
      if (has(f)) continue;
      bool local = true, proper = false;
      u.for_each([&](std::size_t x) {
        const auto& ux = space.minimal_open(x);
        proper |= !(ux == u);
        if (!has(onto_image(h.space, ux, full_values(f)))) local = false;
      });
      if (local && proper)
        add_capped(out, "gluing", "locally a member but missing", map_json(f));
    }
  return out;
}

ClassicalPseudogroup classical_pseudogroup(const PrePseudogroup& c, Dialect dialect) {
  if (!is_concrete(c, dialect)) throw Error(ErrorKind::NotConcrete, "underlying maps do not separate morphisms");
  const auto functor = underlying_functor(c, dialect);
  const std::size_t n = c.open_count();
  ClassicalPseudogroup out{c.space_ptr(), {}};
  std::set<MapKey> seen;
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      for (HomId f = 0; f < c.hom_size(u, v); ++f) {
        bool invertible = false;
        for (HomId g = 0; g < c.hom_size(v, u) && !invertible; ++g)
          invertible = c.compose(u, v, u, g, f) == c.inclusion(u, u) && c.compose(v, u, v, f, g) == c.inclusion(v, v);
        if (!invertible) continue;
        const auto& map = functor(u * n + v, f);
        auto classical = onto_image(c.space_ptr(), map.domain(), full_values(map));
        if (seen.insert(key_of(classical)).second) out.maps.push_back(std::move(classical));
      }
  return out;
}

PrePseudogroup classical_to_concrete(const ClassicalPseudogroup& h) {
  if (const auto report = check_classical(h); !report.ok())
    throw Error(ErrorKind::NotAPseudogroup, "not a classical pseudogroup", report.to_json());
  const auto& space = *h.space;
  if (!space.is_t1()) throw Error(ErrorKind::NotT1Space, "sheafification of germ families needs a T1 space");
  const std::size_t n = space.open_count();
  std::vector<std::vector<PointMap>> maps(n * n);
  std::vector<std::map<std::vector<std::size_t>, HomId>> lookup(n * n);
  std::vector<std::vector<std::string>> homs(n * n);
  std::vector<std::optional<HomId>> incl(n * n);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = u * n + v;
      for (const auto& f : h.maps) {
        if (!(f.domain() == space.open(u)) || !f.codomain().subset_of(space.open(v))) continue;
        lookup[slot].emplace(f.values(), static_cast<HomId>(maps[slot].size()));
        homs[slot].push_back(map_label(f));
        maps[slot].push_back(f);
      }
      if (space.open(u).subset_of(space.open(v)))
        incl[slot] = lookup[slot].at(PointMap::identity(h.space, space.open(u)).values());
    }
  auto compose = [&](OpenId u, OpenId v, OpenId w, HomId g, HomId f) {
    const auto& mf = maps[u * n + v][f];
    const auto& mg = maps[v * n + w][g];
    std::vector<std::size_t> values;
    mf.domain().for_each([&](std::size_t x) { values.push_back(mg(mf(x))); });
    return lookup[u * n + w].at(values);
  };
  auto underlying = [&](OpenId u, OpenId v, HomId f) { return maps[u * n + v][f].values(); };
  const auto c = PrePseudogroup::generate(h.space, std::move(homs), compose, std::move(incl), underlying);
  return ppg_sheafify(c).sheaf;
}

ClassicalPseudogroup classical_closure(const SpacePtr& space, const std::vector<PointMap>& generators) {
  ClassicalPseudogroup out{space, {}};
  std::set<MapKey> seen;
  auto add = [&](PointMap f) {
    if (seen.insert(key_of(f)).second) out.maps.push_back(std::move(f));
  };
  for (const auto& u : space->opens()) add(PointMap::identity(space, u));
  for (const auto& g : generators) add(onto_image(space, g.domain(), full_values(g)));
  for (std::size_t done = 0; done < out.maps.size();) {
    const std::size_t end = out.maps.size();
    for (; done < end; ++done) {
      const PointMap f = out.maps[done];
      add(inverse_of(f));
      for (const auto& u : space->opens())
        if (u.subset_of(f.domain())) add(onto_image(space, u, full_values(f)));
      for (std::size_t i = 0; i < end; ++i) {
        const PointMap g = out.maps[i];
        if (auto gf = composite(g, f)) add(std::move(*gf));
        if (auto fg = composite(f, g)) add(std::move(*fg));
      }
    }
    if (done == out.maps.size()) {
      for (const auto& u : space->opens())
        for (auto& f : homeomorphisms_from(space, u)) {
          if (seen.count(key_of(f))) continue;
          bool local = true, proper = false;
          u.for_each([&](std::size_t x) {
            const auto& ux = space->minimal_open(x);
            proper |= !(ux == u);
            if (!seen.count(key_of(onto_image(space, ux, full_values(f))))) local = false;
          });
          if (local && proper) add(std::move(f));
        }
    }
  }
  return out;
}

}  // namespace etale
