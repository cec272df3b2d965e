#include "etale/pseudogroup.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace etale {
namespace {

constexpr std::size_t kReportCap = 16;

void add_capped(CheckReport& r, const std::string& check, const std::string& message, nlohmann::json witness) {
  if (r.violations.size() < kReportCap) r.add(check, message, std::move(witness));
}

nlohmann::json open_json(const FiniteSpace& space, OpenId u) { return space.to_labels(space.open(u)); }

nlohmann::json hom_json(const PrePseudogroup& c, OpenId u, OpenId v, HomId f) {
  return {{"from", open_json(c.space(), u)}, {"to", open_json(c.space(), v)}, {"id", c.homs(u, v)[f]}};
}

nlohmann::json arrow_json(const PrePseudogroup& c, const GermArrow& a) {
  const auto& space = c.space();
  return {{"source", space.label(a.source)},
          {"target", space.label(a.target)},
          {"germ", c.homs(space.minimal_open_id(a.source), space.full_id())[a.germ]}};
}

std::string map_label(const FiniteSpace& space, const PointSet& domain, const std::vector<std::size_t>& values) {
  std::string out = "[";
  bool first = true;
  domain.for_each([&](std::size_t x) {
    if (!first) out += ';';
    first = false;
    out += std::to_string(space.label(x)) + '>' + std::to_string(space.label(values[x]));
  });
  return out + "]";
}

/// Factors of a germ a in homs(U_x, X) through incl(U_y, X).
std::vector<HomId> factors_through(const PrePseudogroup& c, OpenId ux, OpenId uy, HomId a) {
  std::vector<HomId> out;
  const OpenId full = c.space().full_id();
  for (HomId r = 0; r < c.hom_size(ux, uy); ++r)
    if (c.extend(ux, uy, full, r) == a) out.push_back(r);
  return out;
}

/// Germ arrow of f in homs(U, V) at x, given the decomposition (T1) or stored functor (NonT1).
std::optional<std::size_t> germ_arrow_of(const PrePseudogroup& c, const GermGroupoid& g, const GermDecomposition* dec,
                                         OpenId u, OpenId v, HomId f, std::size_t x) {
  const auto& space = c.space();
  const OpenId ux = space.minimal_open_id(x);
  const HomId local = c.restrict(u, v, ux, f);
  if (g.dialect == Dialect::T1) {
    const std::size_t slot = x * space.open_count() + v;
    const auto& y = dec->target[slot][local];
    if (!y) return std::nullopt;
    return g.arrow_for(x, *y, dec->rep[slot][local]);
  }
  return g.by_germ[x][c.extend(ux, v, space.full_id(), local)];
}

}  // namespace

std::string_view to_string(Dialect d) { return d == Dialect::T1 ? "T1" : "nonT1"; }

PrePseudogroup::PrePseudogroup(PrePseudogroupData data) : data_(std::move(data)) {
  if (!data_.space) throw Error(ErrorKind::SchemaError, "pre-pseudogroup without a space");
  const auto& space = *data_.space;
  n_ = space.open_count();
  const std::size_t n = n_;
  if (data_.homs.size() != n * n || data_.incl.size() != n * n || data_.compose.size() != n * n * n)
    throw Error(ErrorKind::SchemaError, "pre-pseudogroup tables do not match the open lattice");
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const auto& inc = data_.incl[u * n + v];
      if (inc) {
        if (!space.open(u).subset_of(space.open(v)))
          throw Error(ErrorKind::SchemaError, "inclusion between non-nested opens",
                      {{"from", open_json(space, u)}, {"to", open_json(space, v)}});
        if (*inc >= hom_size(u, v)) throw Error(ErrorKind::SchemaError, "inclusion id out of range");
      }
      for (OpenId w = 0; w < n; ++w) {
        const auto& table = data_.compose[(u * n + v) * n + w];
        if (table.size() != hom_size(v, w) * hom_size(u, v))
          throw Error(ErrorKind::SchemaError, "composition table is not total",
                      {{"U", open_json(space, u)}, {"V", open_json(space, v)}, {"W", open_json(space, w)}});
        for (HomId h : table)
          if (h >= hom_size(u, w))
            throw Error(ErrorKind::SchemaError, "composite out of range",
                        {{"U", open_json(space, u)}, {"V", open_json(space, v)}, {"W", open_json(space, w)}});
      }
    }
  }
  if (data_.underlying) {
    const auto& und = *data_.underlying;
    if (und.size() != n * n) throw Error(ErrorKind::SchemaError, "underlying table does not match the open lattice");
    for (OpenId u = 0; u < n; ++u) {
      for (OpenId v = 0; v < n; ++v) {
        const auto& maps = und[u * n + v];
        if (maps.size() != hom_size(u, v)) throw Error(ErrorKind::SchemaError, "underlying map missing");
        for (HomId f = 0; f < maps.size(); ++f) {
          if (maps[f].size() != space.open(u).size())
            throw Error(ErrorKind::SchemaError, "underlying map is not total", hom_json(*this, u, v, f));
          for (auto y : maps[f])
            if (y >= space.size() || !space.open(v).contains(y))
              throw Error(ErrorKind::SchemaError, "underlying map leaves its codomain", hom_json(*this, u, v, f));
        }
      }
    }
  }
}

PrePseudogroup PrePseudogroup::generate(SpacePtr space, std::vector<std::vector<std::string>> homs,
                                        const ComposeFn& compose, std::vector<std::optional<HomId>> incl,
                                        const UnderlyingFn& underlying) {
  const std::size_t n = space->open_count();
  PrePseudogroupData d;
  d.space = std::move(space);
  d.homs = std::move(homs);
  d.incl = std::move(incl);
  if (d.homs.size() != n * n) throw Error(ErrorKind::SchemaError, "homs table does not match the open lattice");
  d.compose.resize(n * n * n);
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t su = d.homs[u * n + v].size();
      if (su == 0) continue;
      for (OpenId w = 0; w < n; ++w) {
        const std::size_t sv = d.homs[v * n + w].size();
        auto& table = d.compose[(u * n + v) * n + w];
        table.resize(sv * su);
        for (HomId g = 0; g < sv; ++g)
          for (HomId f = 0; f < su; ++f) table[g * su + f] = compose(u, v, w, g, f);
      }
    }
  }
  if (underlying) {
    std::vector<std::vector<std::vector<std::size_t>>> und(n * n);
    for (OpenId u = 0; u < n; ++u)
      for (OpenId v = 0; v < n; ++v)
        for (HomId f = 0; f < d.homs[u * n + v].size(); ++f) und[u * n + v].push_back(underlying(u, v, f));
    d.underlying = std::move(und);
  }
  return PrePseudogroup(std::move(d));
}

HomId PrePseudogroup::inclusion(OpenId u, OpenId v) const {
  const auto& inc = data_.incl[u * n_ + v];
  if (!inc)
    throw Error(ErrorKind::SchemaError, "missing inclusion",
                {{"from", open_json(space(), u)}, {"to", open_json(space(), v)}});
  return *inc;
}

PointMap PrePseudogroup::stored_underlying(OpenId u, OpenId v, HomId f) const {
  if (!data_.underlying) throw Error(ErrorKind::MissingUnderlying, "no underlying functor stored");
  const auto& sp = space();
  const auto& stored = (*data_.underlying)[u * n_ + v][f];
  std::vector<std::size_t> values(sp.size(), 0);
  std::size_t i = 0;
  sp.open(u).for_each([&](std::size_t x) { values[x] = stored[i++]; });
  return PointMap(data_.space, sp.open(u), data_.space, sp.open(v), std::move(values));
}

std::optional<HomId> PrePseudogroup::find(OpenId u, OpenId v, const std::string& label) const {
  const auto& h = homs(u, v);
  auto it = std::find(h.begin(), h.end(), label);
  if (it == h.end()) return std::nullopt;
  return static_cast<HomId>(it - h.begin());
}

Presheaf hom_presheaf(const PrePseudogroup& c, OpenId v) {
  const std::size_t n = c.open_count();
  std::vector<std::vector<std::string>> sections(n);
  for (OpenId u = 0; u < n; ++u) sections[u] = c.homs(u, v);
  return Presheaf::from_function(c.space_ptr(), std::move(sections), [&](OpenId from, OpenId to, SectionId s) {
    return static_cast<SectionId>(c.restrict(from, v, to, static_cast<HomId>(s)));
  });
}

ConditionReport check_category(const PrePseudogroup& c) {
  ConditionReport out;
  auto& cat = out["category"];
  auto& emb = out["(1)"];
  const auto& space = c.space();
  const std::size_t n = c.open_count();

  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      if (space.open(u).subset_of(space.open(v)) && !c.incl(u, v))
        add_capped(emb, "embedding", "inclusion missing", {{"from", open_json(space, u)}, {"to", open_json(space, v)}});
  if (!emb.ok()) {
    cat.skipped = true;
    cat.note = "identities require every inclusion";
    return out;
  }

  for (OpenId u = 0; u < n; ++u) {
    const HomId id_u = *c.incl(u, u);
    for (OpenId v = 0; v < n; ++v) {
      const HomId id_v = *c.incl(v, v);
      for (HomId f = 0; f < c.hom_size(u, v); ++f) {
        if (c.compose(u, u, v, f, id_u) != f)
          add_capped(cat, "right identity", "f o id differs from f", hom_json(c, u, v, f));
        if (c.compose(u, v, v, id_v, f) != f)
          add_capped(cat, "left identity", "id o f differs from f", hom_json(c, u, v, f));
      }
    }
  }

  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t suv = c.hom_size(u, v);
      if (suv == 0) continue;
      for (OpenId w = 0; w < n; ++w) {
        const std::size_t svw = c.hom_size(v, w);
        if (svw == 0) continue;
        for (OpenId z = 0; z < n; ++z) {
          const std::size_t swz = c.hom_size(w, z);
          for (HomId h = 0; h < swz; ++h) {
            for (HomId g = 0; g < svw; ++g) {
              const HomId hg = c.compose(v, w, z, h, g);
              for (HomId f = 0; f < suv; ++f) {
                if (c.compose(u, w, z, h, c.compose(u, v, w, g, f)) != c.compose(u, v, z, hg, f))
                  add_capped(cat, "associativity", "h o (g o f) differs from (h o g) o f",
                             {{"f", hom_json(c, u, v, f)}, {"g", hom_json(c, v, w, g)}, {"h", hom_json(c, w, z, h)}});
              }
            }
          }
        }
      }
    }
  }

  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      if (!c.incl(u, v)) continue;
      for (OpenId w = 0; w < n; ++w) {
        if (!c.incl(v, w)) continue;
        if (c.compose(u, v, w, *c.incl(v, w), *c.incl(u, v)) != *c.incl(u, w))
          add_capped(emb, "embedding", "composite of inclusions is not the inclusion",
                     {{"U", open_json(space, u)}, {"V", open_json(space, v)}, {"W", open_json(space, w)}});
      }
    }
  }
  return out;
}

GermDecomposition decompose(const PrePseudogroup& c) {
  const auto& space = c.space();
  const std::size_t n = c.open_count();
  const std::size_t pts = space.size();
  GermDecomposition dec;
  dec.target.resize(pts * n);
  dec.rep.resize(pts * n);
  for (std::size_t x = 0; x < pts; ++x) {
    const OpenId ux = space.minimal_open_id(x);
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = x * n + v;
      const std::size_t size = c.hom_size(ux, v);
      dec.target[slot].assign(size, std::nullopt);
      dec.rep[slot].assign(size, 0);
      std::vector<std::vector<std::pair<std::size_t, HomId>>> hits(size);
      bool missing_incl = false;
      space.open(v).for_each([&](std::size_t y) {
        const OpenId uy = space.minimal_open_id(y);
        const auto inc = c.incl(uy, v);
        if (!inc) {
          missing_incl = true;
          return;
        }
        for (HomId r = 0; r < c.hom_size(ux, uy); ++r) hits[c.compose(ux, uy, v, *inc, r)].push_back({y, r});
      });
      if (missing_incl) {
        add_capped(dec.report, "embedding", "inclusion of a minimal open missing",
                   {{"x", space.label(x)}, {"V", open_json(space, v)}});
        continue;
      }
      for (HomId a = 0; a < size; ++a) {
        const auto& h = hits[a];
        nlohmann::json where = {{"x", space.label(x)}, {"V", open_json(space, v)}, {"germ", c.homs(ux, v)[a]}};
        if (h.empty()) {
          add_capped(dec.report, "exhaustive", "germ lies in no C_x^y", where);
          continue;
        }
        bool single_point = true;
        for (const auto& [y, r] : h) single_point = single_point && y == h.front().first;
        if (!single_point) {
          nlohmann::json ys = nlohmann::json::array();
          for (const auto& [y, r] : h) ys.push_back(space.label(y));
          where["targets"] = ys;
          add_capped(dec.report, "disjoint", "germ lies in several C_x^y", where);
          continue;
        }
        if (h.size() > 1) {
          const std::size_t y = h.front().first;
          nlohmann::json reps = nlohmann::json::array();
          for (const auto& [yy, r] : h) reps.push_back(c.homs(ux, space.minimal_open_id(yy))[r]);
          where["y"] = space.label(y);
          where["preimages"] = reps;
          add_capped(dec.report, "injective", "postcomposition merges distinct elements of C_x^y", where);
        }
        dec.target[slot][a] = h.front().first;
        dec.rep[slot][a] = h.front().second;
      }
    }
  }
  return dec;
}

DecompositionResult check_decomposition(const PrePseudogroup& c) {
  const auto dec = decompose(c);
  DecompositionResult out;
  out.ok = dec.ok();
  if (!out.ok) {
    const auto& v = dec.report.violations.front();
    out.witness = v.witness;
    out.witness["kind"] = v.check;
  }
  return out;
}

const std::vector<std::string>& germ_hom(const PrePseudogroup& c, std::size_t x, OpenId v) {
  return c.homs(c.space().minimal_open_id(x), v);
}

GermTargetHom germ_target_hom(const PrePseudogroup& c, std::size_t x, std::size_t y, Dialect dialect) {
  const auto& space = c.space();
  const OpenId full = space.full_id();
  GermTargetHom out;
  out.source_open = space.minimal_open_id(x);
  if (dialect == Dialect::T1) {
    out.target_open = space.minimal_open_id(y);
    for (HomId r = 0; r < c.hom_size(out.source_open, out.target_open); ++r) {
      out.elements.push_back(r);
      out.in_total.push_back(c.extend(out.source_open, out.target_open, full, r));
    }
    return out;
  }
  out.target_open = full;
  for (HomId a = 0; a < c.hom_size(out.source_open, full); ++a) {
    if (c.stored_underlying(out.source_open, full, a)(x) != y) continue;
    out.elements.push_back(a);
    out.in_total.push_back(a);
  }
  return out;
}

LimitGerms inverse_limit_germs(const PrePseudogroup& c, std::size_t x, std::size_t y, const Budgets& budgets) {
  const auto& space = c.space();
  const OpenId ux = space.minimal_open_id(x);
  LimitGerms out;
  for (OpenId v = 0; v < space.open_count(); ++v)
    if (space.open(v).contains(y)) out.index_opens.push_back(v);
  std::stable_sort(out.index_opens.begin(), out.index_opens.end(),
                   [&](OpenId a, OpenId b) { return space.open(a).size() < space.open(b).size(); });
  const std::size_t k = out.index_opens.size();
  std::vector<HomId> family(k);
  std::size_t nodes = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (++nodes > budgets.search_nodes)
      throw Error(ErrorKind::BudgetExceeded, "inverse limit enumeration exceeded its budget");
    if (i == k) {
      out.families.push_back(family);
      return;
    }
    const OpenId v = out.index_opens[i];
    for (HomId a = 0; a < c.hom_size(ux, v); ++a) {
      bool compatible = true;
      for (std::size_t j = 0; j < i && compatible; ++j) {
        const OpenId w = out.index_opens[j];
        if (space.open(w).subset_of(space.open(v))) compatible = c.extend(ux, w, v, family[j]) == a;
      }
      if (!compatible) continue;
      family[i] = a;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

namespace {

PointMap derived_map(const PrePseudogroup& c, const GermDecomposition& dec, OpenId u, OpenId v, HomId f) {
  const auto& space = c.space();
  std::vector<std::size_t> values(space.size(), 0);
  space.open(u).for_each([&](std::size_t x) {
    const OpenId ux = space.minimal_open_id(x);
    const HomId local = c.restrict(u, v, ux, f);
    const auto& y = dec.target[x * c.open_count() + v][local];
    if (!y) {
      nlohmann::json w = hom_json(c, u, v, f);
      w["x"] = space.label(x);
      throw Error(ErrorKind::DecompositionViolated, "germ has no unique target point", w);
    }
    values[x] = *y;
  });
  return PointMap(c.space_ptr(), space.open(u), c.space_ptr(), space.open(v), std::move(values));
}

}  // namespace

UnderlyingFunctor underlying_functor(const PrePseudogroup& c, Dialect dialect) {
  const std::size_t n = c.open_count();
  UnderlyingFunctor out;
  out.maps.resize(n * n);
  if (dialect == Dialect::NonT1) {
    if (!c.has_underlying()) throw Error(ErrorKind::MissingUnderlying, "no underlying functor stored");
    for (OpenId u = 0; u < n; ++u)
      for (OpenId v = 0; v < n; ++v)
        for (HomId f = 0; f < c.hom_size(u, v); ++f) out.maps[u * n + v].push_back(c.stored_underlying(u, v, f));
    return out;
  }
  const auto dec = decompose(c);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      for (HomId f = 0; f < c.hom_size(u, v); ++f) out.maps[u * n + v].push_back(derived_map(c, dec, u, v, f));
  return out;
}

PointMap underlying_map(const PrePseudogroup& c, OpenId u, OpenId v, HomId f, Dialect dialect) {
  if (dialect == Dialect::NonT1) return c.stored_underlying(u, v, f);
  return derived_map(c, decompose(c), u, v, f);
}

CheckReport check_underlying_functor(const PrePseudogroup& c, const UnderlyingFunctor& functor) {
  CheckReport out;
  const auto& space = c.space();
  const std::size_t n = c.open_count();
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const auto& maps = functor.maps[u * n + v];
      for (HomId f = 0; f < maps.size(); ++f) {
        const auto lh = is_local_homeo(maps[f]);
        if (!lh.ok) {
          nlohmann::json w = hom_json(c, u, v, f);
          nlohmann::json pts = nlohmann::json::array();
          for (auto x : lh.failing_points) pts.push_back(space.label(x));
          w["points"] = pts;
          add_capped(out, lh.continuous ? "local homeomorphism" : "continuity",
                     "underlying map is not a local homeomorphism", w);
        }
      }
      if (const auto inc = c.incl(u, v)) {
        const auto& m = maps[*inc];
        bool is_inclusion = true;
        space.open(u).for_each([&](std::size_t x) { is_inclusion = is_inclusion && m(x) == x; });
        if (!is_inclusion)
          add_capped(out, "inclusion", "underlying map of an inclusion is not the set inclusion",
                     hom_json(c, u, v, *inc));
      }
    }
  }
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const auto& fs = functor.maps[u * n + v];
      if (fs.empty()) continue;
      for (OpenId w = 0; w < n; ++w) {
        const auto& gs = functor.maps[v * n + w];
        const auto& hs = functor.maps[u * n + w];
        for (HomId g = 0; g < gs.size(); ++g) {
          for (HomId f = 0; f < fs.size(); ++f) {
            const auto& h = hs[c.compose(u, v, w, g, f)];
            bool agrees = true;
            space.open(u).for_each([&](std::size_t x) { agrees = agrees && h(x) == gs[g](fs[f](x)); });
            if (!agrees)
              add_capped(out, "functor", "underlying map of g o f differs from the composite map",
                         {{"f", hom_json(c, u, v, f)}, {"g", hom_json(c, v, w, g)}});
          }
        }
      }
    }
  }
  return out;
}

GermGroupoid germ_category(const PrePseudogroup& c, Dialect dialect) {
  const auto& space = c.space();
  const std::size_t pts = space.size();
  const OpenId full = space.full_id();
  GermGroupoid g;
  g.dialect = dialect;
  g.points = pts;
  g.first_arrow.assign(pts * pts + 1, 0);
  g.rep_index.resize(pts * pts);
  g.by_germ.resize(pts);
  if (dialect == Dialect::NonT1 && !c.has_underlying())
    throw Error(ErrorKind::MissingUnderlying, "no underlying functor stored");

  for (std::size_t x = 0; x < pts; ++x) {
    const OpenId ux = space.minimal_open_id(x);
    g.by_germ[x].assign(c.hom_size(ux, full), std::nullopt);
    std::vector<bool> ambiguous(c.hom_size(ux, full), false);
    for (std::size_t y = 0; y < pts; ++y) {
      const OpenId uy = space.minimal_open_id(y);
      const std::size_t slot = x * pts + y;
      g.first_arrow[slot] = g.arrows.size();
      g.rep_index[slot].assign(c.hom_size(ux, uy), std::nullopt);
      const HomId into_full = c.inclusion(uy, full);
      auto push = [&](HomId rep, HomId germ) {
        g.rep_index[slot][rep] = g.arrows.size();
        if (g.by_germ[x][germ]) ambiguous[germ] = true;
        g.by_germ[x][germ] = g.arrows.size();
        g.arrows.push_back({x, y, rep, germ});
      };
      if (dialect == Dialect::T1) {
        for (HomId r = 0; r < c.hom_size(ux, uy); ++r) push(r, c.compose(ux, uy, full, into_full, r));
        continue;
      }
      for (HomId a = 0; a < c.hom_size(ux, full); ++a) {
        if (c.stored_underlying(ux, full, a)(x) != y) continue;
        const auto reps = factors_through(c, ux, uy, a);
        if (reps.size() != 1) {
          nlohmann::json w = {{"source", space.label(x)}, {"target", space.label(y)}, {"germ", c.homs(ux, full)[a]}};
          w["factors"] = reps.size();
          throw Error(ErrorKind::DecompositionViolated,
                      "germ does not factor uniquely through the minimal open of its target", w);
        }
        push(reps.front(), a);
      }
    }
    for (std::size_t a = 0; a < ambiguous.size(); ++a)
      if (ambiguous[a]) g.by_germ[x][a] = std::nullopt;
  }
  g.first_arrow[pts * pts] = g.arrows.size();

  const std::size_t count = g.arrows.size();
  g.identity.assign(pts, 0);
  for (std::size_t x = 0; x < pts; ++x) {
    const OpenId ux = space.minimal_open_id(x);
    const auto id = g.arrow_for(x, x, c.inclusion(ux, ux));
    if (!id) {
      add_capped(g.category_report, "identity", "identity germ is not an arrow x -> x", {{"x", space.label(x)}});
      continue;
    }
    g.identity[x] = *id;
  }

  g.composition.assign(count * count, std::nullopt);
  for (std::size_t f = 0; f < count; ++f) {
    const auto& af = g.arrows[f];
    const OpenId ux = space.minimal_open_id(af.source);
    const OpenId uy = space.minimal_open_id(af.target);
    for (std::size_t h = g.source_begin(af.target); h < g.source_end(af.target); ++h) {
      const auto& ah = g.arrows[h];
      const OpenId uz = space.minimal_open_id(ah.target);
      const HomId rep = c.compose(ux, uy, uz, ah.rep, af.rep);
      const auto k = g.arrow_for(af.source, ah.target, rep);
      if (!k) {
        add_capped(g.category_report, "composition", "composite germ is not an arrow between the expected points",
                   {{"f", arrow_json(c, af)}, {"g", arrow_json(c, ah)}});
        continue;
      }
      g.composition[h * count + f] = *k;
    }
  }
  if (!g.category_report.ok()) return g;

  for (std::size_t f = 0; f < count; ++f) {
    const auto& af = g.arrows[f];
    if (*g.compose(g.identity[af.target], f) != f || *g.compose(f, g.identity[af.source]) != f)
      add_capped(g.category_report, "unit", "identity germ is not a unit", arrow_json(c, af));
    for (std::size_t h = g.source_begin(af.target); h < g.source_end(af.target); ++h) {
      const std::size_t hf = *g.compose(h, f);
      const auto& ah = g.arrows[h];
      for (std::size_t k = g.source_begin(ah.target); k < g.source_end(ah.target); ++k)
        if (*g.compose(k, hf) != *g.compose(*g.compose(k, h), f))
          add_capped(g.category_report, "associativity", "germ composition is not associative",
                     {{"f", arrow_json(c, af)}, {"g", arrow_json(c, ah)}, {"h", arrow_json(c, g.arrows[k])}});
    }
  }
  if (!g.category_report.ok()) return g;

  g.inverse.assign(count, std::nullopt);
  for (std::size_t f = 0; f < count; ++f) {
    const auto& af = g.arrows[f];
    for (std::size_t h = g.begin(af.target, af.source); h < g.end(af.target, af.source); ++h) {
      if (*g.compose(h, f) == g.identity[af.source] && *g.compose(f, h) == g.identity[af.target]) {
        g.inverse[f] = h;
        break;
      }
    }
    if (!g.inverse[f]) add_capped(g.groupoid_report, "(3)", "germ has no inverse", arrow_json(c, af));
  }
  return g;
}

GermGroupoid build_germ_groupoid(const PrePseudogroup& c, Dialect dialect) {
  auto g = germ_category(c, dialect);
  if (!g.category_report.ok()) {
    const auto& v = g.category_report.violations.front();
    throw Error(ErrorKind::NotAGroupoid, "germ composition violates the category axioms: " + v.message, v.witness);
  }
  if (!g.groupoid_report.ok())
    throw Error(ErrorKind::NotAGroupoid, "germ category is not a groupoid", g.groupoid_report.violations.front().witness);
  return g;
}

CheckReport check_germ_composition(const PrePseudogroup& c, Dialect dialect) {
  CheckReport out;
  const auto& space = c.space();
  const std::size_t n = c.open_count();
  GermGroupoid g;
  std::optional<GermDecomposition> dec;
  try {
    if (dialect == Dialect::T1) dec = decompose(c);
    g = germ_category(c, dialect);
  } catch (const Error& e) {
    out.add("germ category", e.what(), e.witness());
    return out;
  }
  if (!g.category_report.ok()) {
    out.merge(g.category_report);
    return out;
  }
  const GermDecomposition* d = dec ? &*dec : nullptr;
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t suv = c.hom_size(u, v);
      if (suv == 0) continue;
      for (HomId f = 0; f < suv; ++f) {
        std::vector<std::optional<std::size_t>> germ_f(space.size());
        bool complete = true;
        space.open(u).for_each([&](std::size_t x) {
          germ_f[x] = germ_arrow_of(c, g, d, u, v, f, x);
          if (!germ_f[x] || !space.open(v).contains(g.arrows[*germ_f[x]].target)) complete = false;
        });
        if (!complete) {
          add_capped(out, "germ", "germ of a morphism is not classified inside its codomain", hom_json(c, u, v, f));
          continue;
        }
        for (OpenId w = 0; w < n; ++w) {
          for (HomId h = 0; h < c.hom_size(v, w); ++h) {
            const HomId hf = c.compose(u, v, w, h, f);
            space.open(u).for_each([&](std::size_t x) {
              const auto& af = g.arrows[*germ_f[x]];
              const auto ah = germ_arrow_of(c, g, d, v, w, h, af.target);
              const auto ahf = germ_arrow_of(c, g, d, u, w, hf, x);
              if (!ah || !ahf || g.compose(*ah, *germ_f[x]) != ahf) {
                nlohmann::json wj = {{"f", hom_json(c, u, v, f)}, {"g", hom_json(c, v, w, h)}, {"x", space.label(x)}};
                add_capped(out, "germ composition", "germ of g o f differs from the composite of germs", wj);
              }
            });
          }
        }
      }
    }
  }
  return out;
}

namespace {

CheckReport sheaf_condition(const PrePseudogroup& c, const Budgets& budgets) {
  CheckReport out;
  const auto& space = c.space();
  for (OpenId v = 0; v < c.open_count(); ++v) {
    const auto res = is_sheaf(hom_presheaf(c, v), SheafMode::Canonical, budgets);
    if (!res.ok)
      add_capped(out, "(4)", "C(-, V) is not a sheaf",
                 {{"V", open_json(space, v)}, {"witness", to_json(space, *res.witness)}});
  }
  return out;
}

CheckReport groupoid_condition(const PrePseudogroup& c, Dialect dialect) {
  CheckReport out;
  try {
    const auto g = germ_category(c, dialect);
    out.merge(g.category_report);
    out.merge(g.groupoid_report);
  } catch (const Error& e) {
    out.add("(3)", e.what(), e.witness());
  }
  return out;
}

}  // namespace

ConditionReport check_pre_pseudogroup(const PrePseudogroup& c, Dialect dialect) {
  if (dialect == Dialect::T1 && !c.space().is_t1())
    throw Error(ErrorKind::NotT1Space, "the T1 dialect needs a T1 (discrete) space");
  if (dialect == Dialect::NonT1 && !c.has_underlying())
    throw Error(ErrorKind::MissingUnderlying, "the nonT1 dialect needs a stored underlying functor");
  ConditionReport out = check_category(c);
  if (!out.ok()) {
    for (const char* name : {"(2)", "(3)"}) {
      out[name].skipped = true;
      out[name].note = "requires a category with the open lattice embedded";
    }
    return out;
  }
  if (dialect == Dialect::T1) {
    out["(2)"] = decompose(c).report;
    if (out.passes("(2)")) {
      out["(3)"] = groupoid_condition(c, dialect);
    } else {
      out["(3)"].skipped = true;
      out["(3)"].note = "requires (2)";
    }
    return out;
  }
  out["(2)"] = check_underlying_functor(c, underlying_functor(c, dialect));
  out["(3)"] = groupoid_condition(c, dialect);
  return out;
}

ConditionReport is_pseudogroup_sheaf(const PrePseudogroup& c, Dialect dialect, const Budgets& budgets) {
  auto out = check_pre_pseudogroup(c, dialect);
  out["(4)"] = sheaf_condition(c, budgets);
  return out;
}

ConditionReport def21_conditions(const PrePseudogroup& c, const Budgets& budgets) {
  const bool t1 = c.space().is_t1();
  if (!t1 && !c.has_underlying())
    throw Error(ErrorKind::SuiteUnavailable, "condition (3) on a non-T1 space needs a stored underlying functor");
  ConditionReport out = check_category(c);
  const bool category = out.ok();
  if (category) {
    out["(2)"] = decompose(c).report;
  } else {
    out["(2)"].skipped = true;
    out["(2)"].note = "requires a category with the open lattice embedded";
  }
  if (!category) {
    out["(3)"].skipped = true;
    out["(3)"].note = "requires a category with the open lattice embedded";
  } else if (t1) {
    out["(3)"] = groupoid_condition(c, Dialect::T1);
  } else {
    out["(3)"] = groupoid_condition(c, Dialect::NonT1);
    out["(3)"].note = "germ targets read from the stored underlying functor";
  }
  out["(4)"] = sheaf_condition(c, budgets);
  return out;
}

PrePseudogroup build_homeo_l(const SpacePtr& space) {
  const std::size_t n = space->open_count();
  const std::size_t pts = space->size();
  std::vector<std::vector<std::string>> homs(n * n);
  std::vector<std::vector<std::vector<std::size_t>>> maps(n * n);  // full-length value vectors
  std::vector<std::unordered_map<std::vector<std::size_t>, HomId, IndexVectorHash>> index(n * n);
  std::vector<std::optional<HomId>> incl(n * n);
  const Budgets budgets;

  for (OpenId u = 0; u < n; ++u) {
    const auto domain = space->open(u).elements();
    for (OpenId v = 0; v < n; ++v) {
      const auto codomain = space->open(v).elements();
      if (!domain.empty() && codomain.empty()) continue;
      double total = 1;
      for (std::size_t i = 0; i < domain.size(); ++i) total *= static_cast<double>(codomain.size());
      if (total > static_cast<double>(budgets.search_nodes))
        throw Error(ErrorKind::EnumerationBudgetExceeded, "too many maps to enumerate local homeomorphisms");
      std::vector<std::size_t> digits(domain.size(), 0);
      std::vector<std::size_t> values(pts, 0);
      while (true) {
        for (std::size_t i = 0; i < domain.size(); ++i) values[domain[i]] = codomain[digits[i]];
        PointMap m(space, space->open(u), space, space->open(v), values);
        if (is_local_homeo(m).ok) {
          const auto id = static_cast<HomId>(homs[u * n + v].size());
          homs[u * n + v].push_back(map_label(*space, space->open(u), values));
          std::vector<std::size_t> key = m.values();
          index[u * n + v].emplace(key, id);
          maps[u * n + v].push_back(std::move(key));
        }
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == codomain.size()) digits[i++] = 0;
        if (i == digits.size()) break;
      }
      if (space->open(u).subset_of(space->open(v))) incl[u * n + v] = index[u * n + v].at(domain);
    }
  }

  auto positions = [&](OpenId u) {
    std::vector<std::size_t> pos(pts, 0);
    std::size_t i = 0;
    space->open(u).for_each([&](std::size_t x) { pos[x] = i++; });
    return pos;
  };
  std::vector<std::vector<std::size_t>> pos(n);
  for (OpenId u = 0; u < n; ++u) pos[u] = positions(u);

  auto compose = [&](OpenId u, OpenId v, OpenId w, HomId g, HomId f) -> HomId {
    const auto& fv = maps[u * n + v][f];
    const auto& gv = maps[v * n + w][g];
    std::vector<std::size_t> key(fv.size());
    for (std::size_t i = 0; i < fv.size(); ++i) key[i] = gv[pos[v][fv[i]]];
    const auto it = index[u * n + w].find(key);
    if (it == index[u * n + w].end())
      throw Error(ErrorKind::InvalidMap, "composite of local homeomorphisms is not a local homeomorphism");
    return it->second;
  };
  auto underlying = [&](OpenId u, OpenId v, HomId f) { return maps[u * n + v][f]; };
  return PrePseudogroup::generate(space, std::move(homs), compose, std::move(incl), underlying);
}

CheckReport check_group_presheaf(const GroupSheafInput& g) {
  CheckReport out;
  const auto& p = g.presheaf;
  const auto& space = p.space();
  const std::size_t n = p.open_count();
  if (g.groups.size() != n) {
    out.add("shape", "one group table per open required", {{"opens", n}, {"tables", g.groups.size()}});
    return out;
  }
  for (OpenId u = 0; u < n; ++u) {
    const auto& grp = g.groups[u];
    const std::size_t k = p.section_count(u);
    const nlohmann::json where = {{"open", open_json(space, u)}};
    bool shape = grp.mul.size() == k && grp.inverse.size() == k && grp.identity < std::max<std::size_t>(k, 1) && k > 0;
    for (const auto& row : grp.mul) {
      shape = shape && row.size() == k;
      for (auto e : row) shape = shape && e < k;
    }
    for (auto e : grp.inverse) shape = shape && e < k;
    if (!shape) {
      out.add("shape", "group table does not match the sections", where);
      continue;
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (grp.mul[grp.identity][a] != a || grp.mul[a][grp.identity] != a)
        add_capped(out, "identity", "identity element is not neutral", where);
      if (grp.mul[a][grp.inverse[a]] != grp.identity || grp.mul[grp.inverse[a]][a] != grp.identity)
        add_capped(out, "inverse", "inverse table is wrong", where);
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t c = 0; c < k; ++c)
          if (grp.mul[grp.mul[a][b]][c] != grp.mul[a][grp.mul[b][c]])
            add_capped(out, "associativity", "multiplication is not associative", where);
    }
  }
  if (!out.ok()) return out;
  for (OpenId from = 0; from < n; ++from) {
    for (OpenId to = 0; to < n; ++to) {
      if (!space.open(to).subset_of(space.open(from))) continue;
      const auto& gf = g.groups[from];
      const auto& gt = g.groups[to];
      const auto& r = p.restriction(from, to);
      const nlohmann::json where = {{"from", open_json(space, from)}, {"to", open_json(space, to)}};
      if (r[gf.identity] != gt.identity) add_capped(out, "homomorphism", "restriction moves the identity", where);
      for (std::size_t a = 0; a < gf.order(); ++a)
        for (std::size_t b = 0; b < gf.order(); ++b)
          if (r[gf.mul[a][b]] != gt.mul[r[a]][r[b]])
            add_capped(out, "homomorphism", "restriction is not a homomorphism", where);
    }
  }
  return out;
}

PrePseudogroup from_group_sheaf(const GroupSheafInput& g) {
  const auto report = check_group_presheaf(g);
  if (!report.ok())
    throw Error(ErrorKind::InvalidGroupSheaf, report.violations.front().message, report.violations.front().witness);
  const auto& p = g.presheaf;
  const auto& space = p.space();
  const std::size_t n = p.open_count();
  std::vector<std::vector<std::string>> homs(n * n);
  std::vector<std::optional<HomId>> incl(n * n);
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      if (!space.open(u).subset_of(space.open(v))) continue;
      homs[u * n + v] = p.sections(u);
      incl[u * n + v] = static_cast<HomId>(g.groups[u].identity);
    }
  }
  auto compose = [&](OpenId u, OpenId v, OpenId, HomId gv, HomId fu) -> HomId {
    return static_cast<HomId>(g.groups[u].mul[p.restrict(v, u, gv)][fu]);
  };
  auto underlying = [&](OpenId u, OpenId, HomId) { return space.open(u).elements(); };
  return PrePseudogroup::generate(p.space_ptr(), std::move(homs), compose, std::move(incl), underlying);
}

bool is_concrete(const PrePseudogroup& c, Dialect dialect) {
  const auto functor = underlying_functor(c, dialect);
  for (const auto& maps : functor.maps) {
    std::unordered_set<std::vector<std::size_t>, IndexVectorHash> seen;
    for (const auto& m : maps)
      if (!seen.insert(m.values()).second) return false;
  }
  return true;
}

std::optional<PrePseudogroup> subcategory(const PrePseudogroup& c,
                                          const std::function<bool(OpenId, OpenId, HomId)>& keep) {
  const std::size_t n = c.open_count();
  const auto& src = c.data();
  PrePseudogroupData d;
  d.space = src.space;
  d.homs.resize(n * n);
  d.incl.resize(n * n);
  d.compose.resize(n * n * n);
  std::vector<std::vector<std::optional<HomId>>> remap(n * n);
  std::vector<std::vector<HomId>> kept(n * n);
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = u * n + v;
      remap[slot].assign(c.hom_size(u, v), std::nullopt);
      for (HomId f = 0; f < c.hom_size(u, v); ++f) {
        if (!keep(u, v, f)) continue;
        remap[slot][f] = static_cast<HomId>(kept[slot].size());
        kept[slot].push_back(f);
        d.homs[slot].push_back(c.homs(u, v)[f]);
      }
      if (const auto inc = c.incl(u, v)) {
        if (!remap[slot][*inc]) return std::nullopt;
        d.incl[slot] = remap[slot][*inc];
      }
    }
  }
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const auto& fs = kept[u * n + v];
      for (OpenId w = 0; w < n; ++w) {
        const auto& gs = kept[v * n + w];
        auto& table = d.compose[(u * n + v) * n + w];
        table.resize(gs.size() * fs.size());
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
          for (std::size_t fi = 0; fi < fs.size(); ++fi) {
            const auto h = remap[u * n + w][c.compose(u, v, w, gs[gi], fs[fi])];
            if (!h) return std::nullopt;
            table[gi * fs.size() + fi] = *h;
          }
        }
      }
    }
  }
  if (src.underlying) {
    std::vector<std::vector<std::vector<std::size_t>>> und(n * n);
    for (std::size_t slot = 0; slot < n * n; ++slot)
      for (HomId f : kept[slot]) und[slot].push_back((*src.underlying)[slot][f]);
    d.underlying = std::move(und);
  }
  return PrePseudogroup(std::move(d));
}

}  // namespace etale
