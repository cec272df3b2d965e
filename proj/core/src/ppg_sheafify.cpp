#include "etale/ppg_sheafify.hpp"

#include <algorithm>
#include <map>

namespace etale {
namespace {

constexpr std::size_t kReportCap = 16;

void add_capped(CheckReport& r, const std::string& check, const std::string& message, nlohmann::json witness) {
  if (r.violations.size() < kReportCap) r.add(check, message, std::move(witness));
}

nlohmann::json open_json(const FiniteSpace& space, OpenId u) { return space.to_labels(space.open(u)); }

nlohmann::json hom_json(const PrePseudogroup& c, OpenId u, OpenId v, HomId f) {
  return {{"from", open_json(c.space(), u)}, {"to", open_json(c.space(), v)}, {"hom", c.homs(u, v)[f]}};
}

std::string family_label(const PrePseudogroup& c, const std::vector<OpenId>& minimal, const std::vector<std::size_t>& pts,
                         OpenId v, const std::vector<HomId>& family) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) out += "(" + c.homs(minimal[pts[i]], v)[family[i]] + ")";
  return out.empty() ? "()" : out;
}

}  // namespace

CheckReport check_ppg_morphism(const PpgMorphism& phi, const PrePseudogroup& c, const PrePseudogroup& d) {
  CheckReport out;
  if (!(c.space() == d.space())) {
    out.add("space", "source and target live on different spaces");
    return out;
  }
  const std::size_t n = c.open_count();
  if (phi.components.size() != n * n) {
    out.add("shape", "one component per pair of opens expected");
    return out;
  }
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      const auto& comp = phi.components[u * n + v];
      if (comp.size() != c.hom_size(u, v)) {
        add_capped(out, "shape", "component size differs from the hom-set", {{"from", open_json(c.space(), u)},
                                                                              {"to", open_json(c.space(), v)}});
        continue;
      }
      for (HomId f : comp)
        if (f >= d.hom_size(u, v))
          add_capped(out, "shape", "component value outside the target hom-set",
                     {{"from", open_json(c.space(), u)}, {"to", open_json(c.space(), v)}});
    }
  if (!out.ok()) return out;

  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      const auto ic = c.incl(u, v);
      const auto id = d.incl(u, v);
      if (ic.has_value() != id.has_value() || (ic && phi(u * n + v, *ic) != *id))
        add_capped(out, "inclusion", "inclusion not preserved",
                   {{"from", open_json(c.space(), u)}, {"to", open_json(c.space(), v)}});
    }
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      for (OpenId w = 0; w < n; ++w)
        for (HomId g = 0; g < c.hom_size(v, w); ++g)
          for (HomId f = 0; f < c.hom_size(u, v); ++f) {
            const HomId lhs = phi(u * n + w, c.compose(u, v, w, g, f));
            const HomId rhs = d.compose(u, v, w, phi(v * n + w, g), phi(u * n + v, f));
            if (lhs != rhs)
              add_capped(out, "composition", "composite not preserved",
                         {{"g", hom_json(c, v, w, g)}, {"f", hom_json(c, u, v, f)}});
          }
  return out;
}

std::optional<HomId> SharpPseudogroup::find_family(OpenId u, OpenId v, const std::vector<HomId>& family) const {
  const auto& fams = families[u * category.open_count() + v];
  const auto it = std::find(fams.begin(), fams.end(), family);
  if (it == fams.end()) return std::nullopt;
  return static_cast<HomId>(it - fams.begin());
}

SharpPseudogroup ppg_sharp(const PrePseudogroup& c) {
  const auto& space = c.space();
  if (!space.is_t1()) throw Error(ErrorKind::NotT1Space, "germ families need a T1 space");
  SharpPseudogroup out;
  out.decomposition = decompose(c);
  if (!out.decomposition.ok())
    throw Error(ErrorKind::DecompositionViolated, "germs do not decompose by target",
                out.decomposition.report.to_json());
  const auto& dec = out.decomposition;
  const std::size_t n = c.open_count();
  std::vector<OpenId> minimal(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) minimal[x] = space.minimal_open_id(x);
  std::vector<std::vector<std::size_t>> pts(n);
  std::vector<std::vector<std::size_t>> position(n, std::vector<std::size_t>(space.size(), 0));
  for (OpenId u = 0; u < n; ++u) {
    pts[u] = space.open(u).elements();
    for (std::size_t i = 0; i < pts[u].size(); ++i) position[u][pts[u][i]] = i;
  }

  std::vector<std::vector<std::string>> homs(n * n);
  out.families.resize(n * n);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      auto& fams = out.families[u * n + v];
      std::vector<HomId> digits(pts[u].size(), 0);
      bool empty = false;
      for (std::size_t i = 0; i < pts[u].size(); ++i) empty |= c.hom_size(minimal[pts[u][i]], v) == 0;
      if (empty) continue;
      while (true) {
        fams.push_back(digits);
        homs[u * n + v].push_back(family_label(c, minimal, pts[u], v, digits));
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == c.hom_size(minimal[pts[u][i]], v)) digits[i++] = 0;
        if (i == digits.size()) break;
      }
    }

  // Families are enumerated in mixed radix with the first point varying fastest.
  auto index_of = [&](OpenId u, OpenId v, const std::vector<HomId>& family) {
    std::size_t code = 0;
    for (std::size_t i = family.size(); i-- > 0;) code = code * c.hom_size(minimal[pts[u][i]], v) + family[i];
    return static_cast<HomId>(code);
  };
  std::vector<std::optional<HomId>> incl(n * n);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      if (!space.open(u).subset_of(space.open(v))) continue;
      std::vector<HomId> family;
      for (std::size_t x : pts[u]) family.push_back(c.inclusion(minimal[x], v));
      incl[u * n + v] = index_of(u, v, family);
    }
  auto germ_target = [&](std::size_t x, OpenId v, HomId a) { return *dec.target[x * n + v][a]; };

  auto compose = [&](OpenId u, OpenId v, OpenId w, HomId b, HomId a) {
    const auto& fa = out.families[u * n + v][a];
    const auto& fb = out.families[v * n + w][b];
    std::vector<HomId> result(fa.size());
    for (std::size_t i = 0; i < fa.size(); ++i) {
      const std::size_t x = pts[u][i];
      const std::size_t y = germ_target(x, v, fa[i]);
      const HomId rep = dec.rep[x * n + v][fa[i]];
      result[i] = c.compose(minimal[x], minimal[y], w, fb[position[v][y]], rep);
    }
    return index_of(u, w, result);
  };
  PrePseudogroup::UnderlyingFn underlying;
  if (c.has_underlying())
    underlying = [&](OpenId u, OpenId v, HomId a) {
      std::vector<std::size_t> values;
      const auto& fa = out.families[u * n + v][a];
      for (std::size_t i = 0; i < fa.size(); ++i) values.push_back(germ_target(pts[u][i], v, fa[i]));
      return values;
    };
  out.category = PrePseudogroup::generate(c.space_ptr(), std::move(homs), compose, std::move(incl), underlying);

  out.unit.components.resize(n * n);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      for (HomId f = 0; f < c.hom_size(u, v); ++f) {
        std::vector<HomId> family;
        for (std::size_t x : pts[u]) family.push_back(c.restrict(u, v, minimal[x], f));
        out.unit.components[u * n + v].push_back(index_of(u, v, family));
      }
  return out;
}

FamilySelection close_families(const SharpPseudogroup& sharp, bool compose, bool glue, ClosureOrder order,
                               std::size_t* passes) {
  const auto& s = sharp.category;
  const auto& space = s.space();
  const std::size_t n = s.open_count();
  FamilySelection sel(n * n);
  for (std::size_t slot = 0; slot < n * n; ++slot) {
    sel[slot].assign(sharp.families[slot].size(), false);
    for (HomId f : sharp.unit.components[slot]) sel[slot][f] = true;
  }

  auto compose_closure = [&] {
    bool changed = false, again = true;
    while (again) {
      again = false;
      for (OpenId u = 0; u < n; ++u)
        for (OpenId v = 0; v < n; ++v)
          for (OpenId w = 0; w < n; ++w)
            for (HomId b = 0; b < s.hom_size(v, w); ++b) {
              if (!sel[v * n + w][b]) continue;
              for (HomId a = 0; a < s.hom_size(u, v); ++a) {
                if (!sel[u * n + v][a]) continue;
                auto&& slot = sel[u * n + w][s.compose(u, v, w, b, a)];
                if (!slot) slot = again = changed = true;
              }
            }
    }
    return changed;
  };
  auto glue_closure = [&] {
    bool changed = false, again = true;
    while (again) {
      again = false;
      for (OpenId u = 0; u < n; ++u)
        for (OpenId v = 0; v < n; ++v)
          for (HomId a = 0; a < s.hom_size(u, v); ++a) {
            if (sel[u * n + v][a]) {
              for (OpenId u2 = 0; u2 < n; ++u2) {
                if (!space.open(u2).subset_of(space.open(u))) continue;
                auto&& slot = sel[u2 * n + v][s.restrict(u, v, u2, a)];
                if (!slot) slot = again = changed = true;
              }
              continue;
            }
            bool local = true;
            space.open(u).for_each([&](std::size_t x) {
              const OpenId ux = space.minimal_open_id(x);
              if (ux != u && !sel[ux * n + v][s.restrict(u, v, ux, a)]) local = false;
            });
            // A one-element cover is U itself, which adds nothing.
            bool proper = false;
            space.open(u).for_each([&](std::size_t x) { proper |= space.minimal_open_id(x) != u; });
            if (local && proper) {
              sel[u * n + v][a] = true;
              again = changed = true;
            }
          }
    }
    return changed;
  };

  std::size_t count = 0;
  while (true) {
    ++count;
    bool changed = false;
    if (order == ClosureOrder::ComposeFirst) {
      if (compose) changed |= compose_closure();
      if (glue) changed |= glue_closure();
    } else {
      if (glue) changed |= glue_closure();
      if (compose) changed |= compose_closure();
    }
    if (!changed) break;
  }
  if (passes) *passes = count;
  return sel;
}

PpgSheafification ppg_sheafify(const PrePseudogroup& c, ClosureOrder order) {
  PpgSheafification out;
  out.sharp = ppg_sharp(c);
  out.selection = close_families(out.sharp, true, true, order, &out.passes);
  const std::size_t n = c.open_count();
  auto sub = subcategory(out.sharp.category,
                         [&](OpenId u, OpenId v, HomId a) { return static_cast<bool>(out.selection[u * n + v][a]); });
  if (!sub) throw Error(ErrorKind::NotAPseudogroup, "closed selection is not a subcategory");
  out.sheaf = std::move(*sub);
  out.embedding.resize(n * n);
  std::vector<std::vector<HomId>> remap(n * n);
  for (std::size_t slot = 0; slot < n * n; ++slot) {
    remap[slot].assign(out.selection[slot].size(), 0);
    for (HomId a = 0; a < out.selection[slot].size(); ++a)
      if (out.selection[slot][a]) {
        remap[slot][a] = static_cast<HomId>(out.embedding[slot].size());
        out.embedding[slot].push_back(a);
      }
  }
  out.unit.components.resize(n * n);
  for (std::size_t slot = 0; slot < n * n; ++slot)
    for (HomId f : out.sharp.unit.components[slot]) out.unit.components[slot].push_back(remap[slot][f]);
  return out;
}

nlohmann::json sheafification_report(const PrePseudogroup& c, const PpgSheafification& hat) {
  const std::size_t n = c.open_count();
  nlohmann::json deltas = nlohmann::json::array();
  std::size_t before = 0, after = 0;
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t b = c.hom_size(u, v), a = hat.sheaf.hom_size(u, v);
      before += b;
      after += a;
      if (a != b)
        deltas.push_back({{"from", open_json(c.space(), u)},
                          {"to", open_json(c.space(), v)},
                          {"before", b},
                          {"after", a}});
    }
  return {{"before", before}, {"after", after}, {"passes", hat.passes}, {"deltas", deltas}};
}

CheckReport check_unit_germs(const PrePseudogroup& c, const PpgSheafification& hat) {
  CheckReport out;
  const auto& space = c.space();
  const std::size_t n = c.open_count();
  for (std::size_t x = 0; x < space.size(); ++x) {
    const OpenId ux = space.minimal_open_id(x);
    for (OpenId v = 0; v < n; ++v) {
      const auto& comp = hat.unit.components[ux * n + v];
      std::vector<bool> hit(hat.sheaf.hom_size(ux, v), false);
      bool injective = true;
      for (HomId f : comp) {
        if (hit[f]) injective = false;
        hit[f] = true;
      }
      const bool surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
      if (!injective || !surjective)
        add_capped(out, "unit germs", injective ? "germ missed by the unit" : "germs identified by the unit",
                   {{"point", space.label(x)}, {"to", open_json(space, v)}});
    }
  }
  return out;
}

Universality check_universality(const PrePseudogroup& c, const PpgSheafification& hat, const PrePseudogroup& d,
                                const PpgMorphism& phi, const Budgets& budgets) {
  const auto& space = c.space();
  const auto& s = hat.sheaf;
  const std::size_t n = c.open_count();
  if (const auto r = check_ppg_morphism(phi, c, d); !r.ok())
    throw Error(ErrorKind::InvalidMorphism, "phi is not a morphism", r.to_json());

  Universality out;
  out.psi.components.resize(n * n);
  for (OpenId u = 0; u < n; ++u) {
    const auto pts = space.open(u).elements();
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = u * n + v;
      for (HomId k = 0; k < s.hom_size(u, v); ++k) {
        const auto& family = hat.sharp.families[slot][hat.embedding[slot][k]];
        std::vector<HomId> local(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const OpenId ux = space.minimal_open_id(pts[i]);
          local[i] = phi(ux * n + v, family[i]);
        }
        std::optional<HomId> glued;
        std::size_t count = 0;
        for (HomId e = 0; e < d.hom_size(u, v); ++e) {
          bool match = true;
          for (std::size_t i = 0; i < pts.size() && match; ++i)
            match = d.restrict(u, v, space.minimal_open_id(pts[i]), e) == local[i];
          if (match && count++ == 0) glued = e;
        }
        if (!glued)
          throw Error(ErrorKind::NoFactorization, "images of germs do not glue in the target", hom_json(s, u, v, k));
        if (count > 1)
          throw Error(ErrorKind::NotAPseudogroupSheaf, "images of germs glue in several ways", hom_json(s, u, v, k));
        out.psi.components[slot].push_back(*glued);
      }
    }
  }
  out.report = check_ppg_morphism(out.psi, s, d);
  for (std::size_t slot = 0; slot < n * n; ++slot)
    for (HomId f = 0; f < phi.components[slot].size(); ++f)
      if (out.psi(slot, hat.unit(slot, f)) != phi(slot, f))
        add_capped(out.report, "factorization", "psi o unit differs from phi",
                   hom_json(c, static_cast<OpenId>(slot / n), static_cast<OpenId>(slot % n), f));

  // Uniqueness: enumerate every morphism agreeing with phi on the unit image.
  if (n > budgets.enum_opens)
    throw Error(ErrorKind::EnumerationBudgetExceeded, "too many opens for morphism enumeration",
                {{"opens", n}, {"budget", budgets.enum_opens}});
  for (std::size_t slot = 0; slot < n * n; ++slot)
    if (s.data().homs[slot].size() > budgets.enum_hom_size || d.data().homs[slot].size() > budgets.enum_hom_size)
      throw Error(ErrorKind::EnumerationBudgetExceeded, "hom-set too large for morphism enumeration",
                  {{"from", open_json(space, static_cast<OpenId>(slot / n))},
                   {"to", open_json(space, static_cast<OpenId>(slot % n))},
                   {"budget", budgets.enum_hom_size}});

  struct Var {
    OpenId u, v;
    HomId k;
  };
  std::vector<Var> vars;
  std::vector<std::vector<std::size_t>> var_index(n * n);
  std::vector<OpenId> order(n);
  for (OpenId u = 0; u < n; ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(),
                   [&](OpenId a, OpenId b) { return space.open(a).size() < space.open(b).size(); });
  for (OpenId u : order)
    for (OpenId v = 0; v < n; ++v)
      for (HomId k = 0; k < s.hom_size(u, v); ++k) {
        var_index[u * n + v].push_back(vars.size());
        vars.push_back({u, v, k});
      }
  std::vector<std::optional<HomId>> fixed(vars.size());
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = u * n + v;
      if (const auto inc = s.incl(u, v)) fixed[var_index[slot][*inc]] = *d.incl(u, v);
      for (HomId f = 0; f < c.hom_size(u, v); ++f) {
        auto& cell = fixed[var_index[slot][hat.unit(slot, f)]];
        const HomId want = phi(slot, f);
        if (cell && *cell != want) return out;  // no morphism at all; psi's report shows why
        cell = want;
      }
    }

  std::vector<std::optional<HomId>> value(vars.size());
  auto val = [&](OpenId u, OpenId v, HomId k) { return value[var_index[u * n + v][k]]; };
  auto consistent = [&](std::size_t i) {
    const auto [p, q, k] = vars[i];
    const HomId mine = *value[i];
    for (OpenId w = 0; w < n; ++w) {
      // as the first factor: g o k with g in s(q, w)
      for (HomId g = 0; g < s.hom_size(q, w); ++g) {
        const auto vg = val(q, w, g);
        const auto vh = val(p, w, s.compose(p, q, w, g, k));
        if (vg && vh && d.compose(p, q, w, *vg, mine) != *vh) return false;
      }
      // as the second factor: k o f with f in s(w, p)
      for (HomId f = 0; f < s.hom_size(w, p); ++f) {
        const auto vf = val(w, p, f);
        const auto vh = val(w, q, s.compose(w, p, q, k, f));
        if (vf && vh && d.compose(w, p, q, mine, *vf) != *vh) return false;
      }
      // as the composite of g in s(w, q) and f in s(p, w)
      for (HomId g = 0; g < s.hom_size(w, q); ++g) {
        const auto vg = val(w, q, g);
        if (!vg) continue;
        for (HomId f = 0; f < s.hom_size(p, w); ++f) {
          if (s.compose(p, w, q, g, f) != k) continue;
          const auto vf = val(p, w, f);
          if (vf && d.compose(p, w, q, *vg, *vf) != mine) return false;
        }
      }
    }
    return true;
  };

  std::size_t nodes = 0;
  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (out.solutions >= 2) return;
    if (++nodes > budgets.search_nodes)
      throw Error(ErrorKind::EnumerationBudgetExceeded, "morphism enumeration exceeded the node budget",
                  {{"nodes", nodes}});
    if (i == vars.size()) {
      ++out.solutions;
      return;
    }
    const auto [u, v, k] = vars[i];
    for (HomId e = 0; e < d.hom_size(u, v); ++e) {
      if (fixed[i] && *fixed[i] != e) continue;
      value[i] = e;
      if (consistent(i)) search(i + 1);
      value[i].reset();
      if (out.solutions >= 2) return;
    }
  };
  search(0);
  return out;
}

ConditionReport check_prop45(const PrePseudogroup& c, const PpgSheafification& hat) {
  ConditionReport out;
  auto& iso = out["iso"];
  auto& subsumed = out["compose-subsumed"];
  const auto& space = c.space();
  const std::size_t n = c.open_count();

  for (OpenId v = 0; v < n; ++v) {
    const auto hat_p = sheafify(hom_presheaf(c, v));
    std::vector<std::vector<std::optional<SectionId>>> map(n);
    for (OpenId u = 0; u < n; ++u) {
      const std::size_t slot = u * n + v;
      std::map<std::vector<SectionId>, SectionId> by_family;
      for (SectionId k = 0; k < hat_p.families[u].size(); ++k) by_family.emplace(hat_p.families[u][k], k);
      std::vector<bool> hit(hat_p.sheaf.section_count(u), false);
      map[u].resize(hat.sheaf.hom_size(u, v));
      for (HomId k = 0; k < hat.sheaf.hom_size(u, v); ++k) {
        const auto& family = hat.sharp.families[slot][hat.embedding[slot][k]];
        const auto it = by_family.find(std::vector<SectionId>(family.begin(), family.end()));
        if (it == by_family.end() || hit[it->second]) {
          add_capped(iso, "bijection", "morphism without a matching section", hom_json(hat.sheaf, u, v, k));
          continue;
        }
        hit[it->second] = true;
        map[u][k] = it->second;
      }
      if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }))
        add_capped(iso, "bijection", "section without a matching morphism",
                   {{"from", open_json(space, u)}, {"to", open_json(space, v)}});
    }
    if (!iso.ok()) continue;
    for (OpenId u = 0; u < n; ++u) {
      for (OpenId u2 = 0; u2 < n; ++u2) {
        if (!space.open(u2).subset_of(space.open(u))) continue;
        for (HomId k = 0; k < hat.sheaf.hom_size(u, v); ++k)
          if (*map[u2][hat.sheaf.restrict(u, v, u2, k)] != hat_p.sheaf.restrict(u, u2, *map[u][k]))
            add_capped(iso, "naturality", "restriction not preserved", hom_json(hat.sheaf, u, v, k));
      }
      for (HomId f = 0; f < c.hom_size(u, v); ++f)
        if (*map[u][hat.unit(u * n + v, f)] != hat_p.unit(u, f))
          add_capped(iso, "units", "units disagree", hom_json(c, u, v, f));
    }
  }

  const auto glued = close_families(hat.sharp, false, true, ClosureOrder::GlueFirst);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      if (glued[u * n + v] != hat.selection[u * n + v])
        add_capped(subsumed, "closure", "composition adds morphisms beyond the gluing closure",
                   {{"from", open_json(space, u)}, {"to", open_json(space, v)}});
  return out;
}

PpgMorphism underlying_morphism(const PrePseudogroup& c, const PrePseudogroup& homeo, Dialect dialect) {
  const std::size_t n = c.open_count();
  const auto functor = underlying_functor(c, dialect);
  PpgMorphism out;
  out.components.resize(n * n);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = u * n + v;
      std::map<std::vector<std::size_t>, HomId> lookup;
      for (HomId h = 0; h < homeo.hom_size(u, v); ++h) lookup.emplace(homeo.stored_underlying(u, v, h).values(), h);
      for (HomId f = 0; f < c.hom_size(u, v); ++f) {
        const auto it = lookup.find(functor(slot, f).values());
        if (it == lookup.end())
          throw Error(ErrorKind::InvalidMorphism, "underlying map is not a local homeomorphism", hom_json(c, u, v, f));
        out.components[slot].push_back(it->second);
      }
    }
  return out;
}

}  // namespace etale
