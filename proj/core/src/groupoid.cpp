#include "etale/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace etale {
namespace {

constexpr std::size_t kReportCap = 16;

void add_capped(CheckReport& r, const std::string& check, const std::string& message, nlohmann::json witness) {
  if (r.violations.size() < kReportCap) r.add(check, message, std::move(witness));
}

nlohmann::json open_json(const FiniteSpace& space, OpenId u) { return space.to_labels(space.open(u)); }

/// Position of each point inside each open, for compact per-open value vectors.
std::vector<std::vector<std::size_t>> open_positions(const FiniteSpace& space) {
  std::vector<std::vector<std::size_t>> pos(space.open_count(), std::vector<std::size_t>(space.size(), 0));
  for (OpenId u = 0; u < space.open_count(); ++u) {
    std::size_t i = 0;
    space.open(u).for_each([&](std::size_t x) { pos[u][x] = i++; });
  }
  return pos;
}

bool shape_ok(const TopGroupoid& g, CheckReport& out) {
  if (!g.base || !g.arrows) {
    out.add("shape", "groupoid without base or arrow space");
    return false;
  }
  const std::size_t n = g.arrow_count();
  const std::size_t b = g.base_size();
  bool ok = g.source.size() == n && g.target.size() == n && g.inverse.size() == n && g.unit.size() == b &&
            g.comp.size() == n * n;
  for (std::size_t a = 0; ok && a < n; ++a) ok = g.source[a] < b && g.target[a] < b && g.inverse[a] < n;
  for (std::size_t x = 0; ok && x < b; ++x) ok = g.unit[x] < n;
  for (std::size_t k = 0; ok && k < g.comp.size(); ++k) ok = !g.comp[k] || *g.comp[k] < n;
  if (!ok) out.add("shape", "structure tables do not match the spaces");
  return ok;
}

}  // namespace

FiberProduct fiber_product(const TopGroupoid& g) {
  const std::size_t n = g.arrow_count();
  FiberProduct out;
  std::vector<std::optional<std::size_t>> index(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (g.source[a] == g.target[b]) {
        index[a * n + b] = out.pairs.size();
        out.pairs.push_back({a, b});
      }
  if (out.pairs.size() > kMaxPoints)
    throw Error(ErrorKind::BudgetExceeded, "fiber product too large", {{"pairs", out.pairs.size()}});
  const auto& arrows = *g.arrows;
  std::vector<int> labels(out.pairs.size());
  std::vector<PointSet> minimal(out.pairs.size());
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    labels[i] = static_cast<int>(i);
    const auto [a, b] = out.pairs[i];
    arrows.minimal_open(a).for_each([&](std::size_t a2) {
      arrows.minimal_open(b).for_each([&](std::size_t b2) {
        if (index[a2 * n + b2]) minimal[i].insert(*index[a2 * n + b2]);
      });
    });
  }
  out.space = share(FiniteSpace::from_minimal_opens(std::move(labels), std::move(minimal), 0));
  return out;
}

CheckReport check_groupoid(const TopGroupoid& g) {
  CheckReport out;
  if (!shape_ok(g, out)) return out;
  const std::size_t n = g.arrow_count();
  auto arrow = [&](std::size_t a) { return nlohmann::json(g.name(a)); };

  for (std::size_t x = 0; x < g.base_size(); ++x)
    if (g.source[g.unit[x]] != x || g.target[g.unit[x]] != x)
      add_capped(out, "unit endpoints", "unit arrow is not a loop at its point", {{"point", g.base->label(x)}});

  bool comp_total = true;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const bool composable = g.source[a] == g.target[b];
      const auto& h = g.comp[a * n + b];
      if (composable != h.has_value()) {
        comp_total = false;
        add_capped(out, "comp domain", composable ? "composable pair without composite" : "composite of a non-composable pair",
                   {{"g", arrow(a)}, {"f", arrow(b)}});
        continue;
      }
      if (h && (g.source[*h] != g.source[b] || g.target[*h] != g.target[a]))
        add_capped(out, "comp endpoints", "composite has wrong source or target", {{"g", arrow(a)}, {"f", arrow(b)}});
    }
  }
  if (!comp_total || !out.ok()) return out;

  for (std::size_t f = 0; f < n; ++f) {
    if (*g.compose(g.unit[g.target[f]], f) != f || *g.compose(f, g.unit[g.source[f]]) != f)
      add_capped(out, "unit law", "unit arrow is not neutral", {{"f", arrow(f)}});
    const std::size_t v = g.inverse[f];
    if (g.source[v] != g.target[f] || g.target[v] != g.source[f] || *g.compose(v, f) != g.unit[g.source[f]] ||
        *g.compose(f, v) != g.unit[g.target[f]]) {
      add_capped(out, "inverse", "inverse is not two-sided", {{"f", arrow(f)}, {"inv", arrow(v)}});
      continue;
    }
  }
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t h = 0; h < n; ++h) {
      if (g.source[h] != g.target[f]) continue;
      const std::size_t hf = *g.compose(h, f);
      for (std::size_t k = 0; k < n; ++k)
        if (g.source[k] == g.target[h] && *g.compose(k, hf) != *g.compose(*g.compose(k, h), f))
          add_capped(out, "associativity", "composition is not associative",
                     {{"f", arrow(f)}, {"g", arrow(h)}, {"h", arrow(k)}});
    }

  auto continuity = [&](const char* name, const PointMap& map) {
    const auto res = check_continuous(map);
    if (res.ok) return;
    nlohmann::json w = {{"map", name}};
    if (res.at_point) w["point"] = map.domain_space().label(*res.at_point);
    if (res.violating_open) w["open"] = map.codomain_space().to_labels(*res.violating_open);
    add_capped(out, "continuity", std::string(name) + " is not continuous", w);
  };
  const auto& base = g.base;
  const auto& arrows = g.arrows;
  continuity("s", PointMap(arrows, arrows->all(), base, base->all(), g.source));
  continuity("t", PointMap(arrows, arrows->all(), base, base->all(), g.target));
  continuity("i", PointMap(base, base->all(), arrows, arrows->all(), g.unit));
  continuity("inv", PointMap(arrows, arrows->all(), arrows, arrows->all(), g.inverse));
  const auto fp = fiber_product(g);
  std::vector<std::size_t> comp_values(fp.pairs.size());
  for (std::size_t i = 0; i < fp.pairs.size(); ++i) comp_values[i] = *g.compose(fp.pairs[i].first, fp.pairs[i].second);
  continuity("comp", PointMap(fp.space, fp.space->all(), arrows, arrows->all(), std::move(comp_values)));
  return out;
}

nlohmann::json EtaleCheck::to_json(const TopGroupoid& g) const {
  std::vector<std::string> s_names, t_names;
  for (auto a : source_failing) s_names.push_back(g.name(a));
  for (auto a : target_failing) t_names.push_back(g.name(a));
  return {{"etale", ok}, {"source_failing", s_names}, {"target_failing", t_names}};
}

EtaleCheck is_etale(const TopGroupoid& g) {
  EtaleCheck out;
  const auto s = is_local_homeo(PointMap(g.arrows, g.arrows->all(), g.base, g.base->all(), g.source));
  const auto t = is_local_homeo(PointMap(g.arrows, g.arrows->all(), g.base, g.base->all(), g.target));
  out.source_failing = s.failing_points;
  out.target_failing = t.failing_points;
  out.ok = s.ok && t.ok;
  return out;
}

std::vector<std::vector<std::size_t>> local_sections(const TopGroupoid& g, const PointSet& u, const Budgets& budgets) {
  const auto& base = *g.base;
  const auto& arrows = *g.arrows;
  const auto pts = u.elements();
  std::vector<std::vector<std::size_t>> by_source(base.size());
  for (std::size_t a = 0; a < g.arrow_count(); ++a) by_source[g.source[a]].push_back(a);

  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> sigma(pts.size());
  std::size_t nodes = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (++nodes > budgets.search_nodes) throw Error(ErrorKind::BudgetExceeded, "section enumeration exceeded its budget");
    if (i == pts.size()) {
      out.push_back(sigma);
      return;
    }
    const std::size_t x = pts[i];
    for (std::size_t a : by_source[x]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const std::size_t y = pts[j];
        if (base.specializes(y, x) && !arrows.specializes(sigma[j], a)) ok = false;
        if (base.specializes(x, y) && !arrows.specializes(a, sigma[j])) ok = false;
      }
      if (!ok) continue;
      sigma[i] = a;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

SectionCategory sections_category(const TopGroupoid& g, const Budgets& budgets) {
  const auto et = is_etale(g);
  if (!et.ok) throw Error(ErrorKind::NotEtale, "source or target is not a local homeomorphism", et.to_json(g));
  const auto& base = *g.base;
  const std::size_t n = base.open_count();
  const auto pos = open_positions(base);

  std::vector<std::vector<std::vector<std::size_t>>> all(n);
  std::vector<std::unordered_map<std::vector<std::size_t>, std::size_t, IndexVectorHash>> index(n);
  for (OpenId u = 0; u < n; ++u) {
    all[u] = local_sections(g, base.open(u), budgets);
    for (std::size_t k = 0; k < all[u].size(); ++k) index[u].emplace(all[u][k], k);
  }

  SectionCategory out;
  out.sections.resize(n * n);
  std::vector<std::vector<std::optional<HomId>>> slot_of(n * n);
  std::vector<std::vector<std::string>> homs(n * n);
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = u * n + v;
      slot_of[slot].assign(all[u].size(), std::nullopt);
      for (std::size_t k = 0; k < all[u].size(); ++k) {
        const auto& sigma = all[u][k];
        if (!std::all_of(sigma.begin(), sigma.end(), [&](std::size_t a) { return base.open(v).contains(g.target[a]); }))
          continue;
        slot_of[slot][k] = static_cast<HomId>(out.sections[slot].size());
        out.sections[slot].push_back(sigma);
        std::string label = "[";
        for (std::size_t i = 0; i < sigma.size(); ++i) label += (i ? ";" : "") + g.name(sigma[i]);
        homs[slot].push_back(label + "]");
      }
    }
  }

  std::vector<std::optional<HomId>> incl(n * n);
  for (OpenId u = 0; u < n; ++u) {
    std::vector<std::size_t> unit_section;
    base.open(u).for_each([&](std::size_t x) { unit_section.push_back(g.unit[x]); });
    const auto it = index[u].find(unit_section);
    if (it == index[u].end())
      throw Error(ErrorKind::NotAGroupoid, "unit section is not continuous", {{"open", open_json(base, u)}});
    for (OpenId v = 0; v < n; ++v)
      if (base.open(u).subset_of(base.open(v))) incl[u * n + v] = slot_of[u * n + v][it->second];
  }

  const auto& sections = out.sections;
  auto compose = [&](OpenId u, OpenId v, OpenId w, HomId gh, HomId fh) -> HomId {
    const auto& f = sections[u * n + v][fh];
    const auto& h = sections[v * n + w][gh];
    std::vector<std::size_t> values(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::size_t y = g.target[f[i]];
      values[i] = *g.compose(h[pos[v][y]], f[i]);
    }
    const auto it = index[u].find(values);
    if (it == index[u].end())
      throw Error(ErrorKind::NotAGroupoid, "composite section is not continuous", {{"open", open_json(base, u)}});
    const auto k = slot_of[u * n + w][it->second];
    if (!k) throw Error(ErrorKind::NotAGroupoid, "composite section leaves its codomain");
    return *k;
  };
  auto underlying = [&](OpenId u, OpenId v, HomId f) {
    std::vector<std::size_t> values;
    for (auto a : sections[u * n + v][f]) values.push_back(g.target[a]);
    return values;
  };
  out.category = PrePseudogroup::generate(g.base, std::move(homs), compose, std::move(incl), underlying);
  return out;
}

nlohmann::json SectionConditionReport::to_json() const {
  auto j = conditions.to_json();
  j["coproduct"] = coproduct;
  return j;
}

SectionConditionReport check_prop11(const PrePseudogroup& c, const Budgets& budgets) {
  SectionConditionReport out;
  auto& conds = out.conditions;
  const auto& space = c.space();
  const std::size_t pts = space.size();
  const OpenId full = space.full_id();

  {
    auto cat = check_category(c);
    auto& one = conds["(1)"];
    for (const auto& [name, rep] : cat.conditions) {
      one.merge(rep);
      if (rep.skipped) one.skipped = true;
    }
  }
  auto& inj = conds["(2.1)"];
  auto& surj = conds["(2.2)"];
  auto& mono = conds["(2.3)"];
  auto& iff = conds["(2.3-iff)"];
  auto& sheaf = conds["(3)"];
  if (!conds.passes("(1)")) {
    for (auto* r : {&inj, &surj, &mono, &iff}) {
      r->skipped = true;
      r->note = "requires (1)";
    }
  } else {
    std::vector<LimitGerms> limits(pts * pts);
    for (std::size_t x = 0; x < pts; ++x)
      for (std::size_t y = 0; y < pts; ++y) limits[x * pts + y] = inverse_limit_germs(c, x, y, budgets);
    auto index_of = [](const LimitGerms& l, OpenId v) -> std::optional<std::size_t> {
      const auto it = std::find(l.index_opens.begin(), l.index_opens.end(), v);
      if (it == l.index_opens.end()) return std::nullopt;
      return static_cast<std::size_t>(it - l.index_opens.begin());
    };

    for (std::size_t x = 0; x < pts; ++x) {
      const OpenId ux = space.minimal_open_id(x);
      for (OpenId v = 0; v < space.open_count(); ++v) {
        std::vector<bool> covered(c.hom_size(ux, v), false);
        space.open(v).for_each([&](std::size_t y) {
          const auto& l = limits[x * pts + y];
          const std::size_t k = *index_of(l, v);
          std::vector<bool> seen(c.hom_size(ux, v), false);
          for (const auto& fam : l.families) {
            if (seen[fam[k]])
              add_capped(inj, "(2.1)", "projection from C_x^y to C_x(V) is not injective",
                         {{"x", space.label(x)}, {"y", space.label(y)}, {"V", open_json(space, v)},
                          {"germ", c.homs(ux, v)[fam[k]]}});
            seen[fam[k]] = true;
            covered[fam[k]] = true;
          }
        });
        for (HomId a = 0; a < covered.size(); ++a)
          if (!covered[a])
            add_capped(surj, "(2.2)", "germ outside every C_x^y",
                       {{"x", space.label(x)}, {"V", open_json(space, v)}, {"germ", c.homs(ux, v)[a]}});
      }

      for (std::size_t y = 0; y < pts; ++y) {
        for (std::size_t z = 0; z < pts; ++z) {
          if (y == z || !space.specializes(y, z)) continue;
          const auto& ly = limits[x * pts + y];
          const auto& lz = limits[x * pts + z];
          std::vector<bool> hit(lz.families.size(), false);
          for (const auto& fam : ly.families) {
            std::vector<HomId> restricted;
            for (OpenId v : lz.index_opens) restricted.push_back(fam[*index_of(ly, v)]);
            const auto it = std::find(lz.families.begin(), lz.families.end(), restricted);
            const nlohmann::json where = {{"x", space.label(x)}, {"y", space.label(y)}, {"z", space.label(z)}};
            if (it == lz.families.end()) {
              add_capped(mono, "(2.3)", "family for y is not a family for z", where);
              continue;
            }
            const auto k = static_cast<std::size_t>(it - lz.families.begin());
            if (hit[k]) add_capped(mono, "(2.3)", "C_x^y does not embed into C_x^z", where);
            hit[k] = true;
          }
        }
      }
    }

    if (!c.has_underlying()) {
      iff.skipped = true;
      iff.note = "needs underlying maps";
    } else {
      for (std::size_t x = 0; x < pts; ++x) {
        const OpenId ux = space.minimal_open_id(x);
        for (std::size_t y = 0; y < pts; ++y) {
          const auto& l = limits[x * pts + y];
          const std::size_t k = *index_of(l, full);
          std::vector<bool> member(c.hom_size(ux, full), false);
          for (const auto& fam : l.families) member[fam[k]] = true;
          for (HomId a = 0; a < member.size(); ++a) {
            const std::size_t fx = c.stored_underlying(ux, full, a)(x);
            if (member[a] != space.specializes(fx, y))
              add_capped(iff, "(2.3-iff)", "membership in C_x^y disagrees with the specialization of f(x) to y",
                         {{"x", space.label(x)}, {"y", space.label(y)}, {"germ", c.homs(ux, full)[a]},
                          {"member", static_cast<bool>(member[a])}});
          }
        }
      }
    }
  }

  for (OpenId v = 0; v < space.open_count(); ++v) {
    const auto res = is_sheaf(hom_presheaf(c, v), SheafMode::Canonical, budgets);
    if (!res.ok)
      add_capped(sheaf, "(3)", "section presheaf is not a sheaf",
                 {{"V", open_json(space, v)}, {"witness", to_json(space, *res.witness)}});
  }

  out.coproduct = conds.passes("(1)") && decompose(c).ok();
  if (space.is_t1()) {
    auto& eq = conds["(2) equivalence"];
    const bool split = conds.passes("(2.1)") && conds.passes("(2.2)") && conds.passes("(2.3)");
    if (split != out.coproduct)
      eq.add("(2) equivalence", "split conditions disagree with the coproduct form",
             {{"split", split}, {"coproduct", out.coproduct}});
  }
  return out;
}

PseudogroupGroupoid groupoid_from_pseudogroup(const PrePseudogroup& c, Dialect dialect, const Budgets& budgets) {
  const auto report = is_pseudogroup_sheaf(c, dialect, budgets);
  if (!report.ok()) throw Error(ErrorKind::NotAPseudogroupSheaf, "input is not a pseudogroup sheaf", report.to_json());
  const auto& space = c.space();
  const OpenId full = space.full_id();
  PseudogroupGroupoid out;
  out.bundle = etale_space(hom_presheaf(c, full));
  out.germs = germ_category(c, dialect);
  const auto& bundle = out.bundle;
  const auto& germs = out.germs;
  const std::size_t n = bundle.germs.size();

  std::vector<std::size_t> arrow_of(n);
  std::vector<std::size_t> total_of(germs.arrows.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, a] = bundle.germs[i];
    const auto k = germs.by_germ[x][a];
    if (!k)
      throw Error(ErrorKind::NotAPseudogroupSheaf, "germ without a unique germ arrow",
                  {{"x", space.label(x)}, {"germ", c.homs(space.minimal_open_id(x), full)[a]}});
    arrow_of[i] = *k;
    total_of[*k] = i;
  }

  auto& g = out.groupoid;
  g.base = c.space_ptr();
  g.arrows = bundle.total;
  g.source.resize(n);
  g.target.resize(n);
  g.inverse.resize(n);
  g.names.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& arrow = germs.arrows[arrow_of[i]];
    g.source[i] = arrow.source;
    g.target[i] = arrow.target;
    g.inverse[i] = total_of[*germs.inverse[arrow_of[i]]];
    g.names[i] = std::to_string(space.label(arrow.source)) + ":" +
                 c.homs(space.minimal_open_id(arrow.source), full)[bundle.germs[i].value];
  }
  g.unit.resize(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) g.unit[x] = total_of[germs.identity[x]];
  g.comp.assign(n * n, std::nullopt);
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t h = 0; h < n; ++h)
      if (g.source[h] == g.target[f]) g.comp[h * n + f] = total_of[*germs.compose(arrow_of[h], arrow_of[f])];
  return out;
}

CheckReport check_basic_open_targets(const PrePseudogroup& c, const PseudogroupGroupoid& h, Dialect dialect) {
  CheckReport out;
  const auto& space = c.space();
  const OpenId full = space.full_id();
  const auto functor = underlying_functor(c, dialect);
  const std::size_t n = c.open_count();
  for (OpenId u = 0; u < n; ++u) {
    for (HomId f = 0; f < c.hom_size(u, full); ++f) {
      const auto& bar = functor(u * n + full, f);
      space.open(u).for_each([&](std::size_t x) {
        const std::size_t germ = h.bundle.germ_index(x, c.restrict(u, full, space.minimal_open_id(x), f));
        if (h.groupoid.target[germ] != bar(x))
          add_capped(out, "basic open", "t on [f, U] differs from the underlying map of f after s",
                     {{"U", open_json(space, u)}, {"f", c.homs(u, full)[f]}, {"x", space.label(x)}});
      });
    }
  }
  return out;
}

Dialect dialect_for(const FiniteSpace& base) { return base.is_t1() ? Dialect::T1 : Dialect::NonT1; }

GroupoidIso roundtrip_groupoid(const TopGroupoid& g, const Budgets& budgets) {
  const auto valid = check_groupoid(g);
  if (!valid.ok()) throw Error(ErrorKind::NotAGroupoid, "input is not a topological groupoid", valid.to_json());
  const auto sections = sections_category(g, budgets);
  const auto& c = sections.category;
  const auto dialect = dialect_for(*g.base);
  const auto h = groupoid_from_pseudogroup(c, dialect, budgets);
  const auto& base = *g.base;
  const std::size_t n = c.open_count();
  const OpenId full = base.full_id();
  const auto pos = open_positions(base);
  const std::size_t arrows = g.arrow_count();

  auto fail = [&](const std::string& equation, nlohmann::json w) {
    w["equation"] = equation;
    throw Error(ErrorKind::WitnessFailed, "round trip breaks " + equation, std::move(w));
  };

  GroupoidIso iso;
  iso.base_map.resize(base.size());
  std::iota(iso.base_map.begin(), iso.base_map.end(), std::size_t{0});
  iso.arrow_map.resize(arrows);
  for (std::size_t a = 0; a < arrows; ++a) {
    const std::size_t x = g.source[a];
    const OpenId ux = base.minimal_open_id(x);
    const auto& local = sections.sections[ux * n + full];
    std::vector<HomId> through;
    for (HomId k = 0; k < local.size(); ++k)
      if (local[k][pos[ux][x]] == a) through.push_back(k);
    if (through.empty())
      throw Error(ErrorKind::NoSectionThroughArrow, "no local section passes through the arrow", {{"arrow", g.name(a)}});
    if (through.size() > 1) fail("section independence", {{"arrow", g.name(a)}});
    for (OpenId u = 0; u < n; ++u) {
      if (!base.open(u).contains(x)) continue;
      const auto& over = sections.sections[u * n + full];
      for (HomId k = 0; k < over.size(); ++k)
        if (over[k][pos[u][x]] == a && c.restrict(u, full, ux, k) != through.front())
          fail("section independence", {{"arrow", g.name(a)}, {"open", open_json(base, u)}});
    }
    iso.arrow_map[a] = h.bundle.germ_index(x, through.front());
  }

  const auto& hg = h.groupoid;
  if (hg.arrow_count() != arrows) fail("bijection", {{"arrows", arrows}, {"germs", hg.arrow_count()}});
  iso.arrow_inverse.assign(arrows, arrows);
  for (std::size_t a = 0; a < arrows; ++a) {
    if (iso.arrow_inverse[iso.arrow_map[a]] != arrows) fail("bijection", {{"arrow", g.name(a)}});
    iso.arrow_inverse[iso.arrow_map[a]] = a;
  }
  for (std::size_t a = 0; a < arrows; ++a) {
    const std::size_t m = iso.arrow_map[a];
    if (hg.source[m] != g.source[a]) fail("s", {{"arrow", g.name(a)}});
    if (hg.target[m] != g.target[a]) fail("t", {{"arrow", g.name(a)}});
    if (iso.arrow_map[g.inverse[a]] != hg.inverse[m]) fail("inv", {{"arrow", g.name(a)}});
    for (std::size_t b = 0; b < arrows; ++b) {
      const auto ab = g.compose(a, b);
      if (ab && iso.arrow_map[*ab] != *hg.compose(m, iso.arrow_map[b]))
        fail("comp", {{"g", g.name(a)}, {"f", g.name(b)}});
    }
  }
  for (std::size_t x = 0; x < base.size(); ++x)
    if (iso.arrow_map[g.unit[x]] != hg.unit[x]) fail("i", {{"point", base.label(x)}});
  if (!is_homeomorphism(PointMap(g.arrows, g.arrows->all(), hg.arrows, hg.arrows->all(), iso.arrow_map)))
    fail("homeomorphism", nlohmann::json::object());

  iso.summary = {{"dialect", to_string(dialect)}, {"arrows", arrows}, {"germs", hg.arrow_count()}};
  return iso;
}

PseudogroupIso roundtrip_pseudogroup(const PrePseudogroup& c, Dialect dialect, const Budgets& budgets) {
  const auto h = groupoid_from_pseudogroup(c, dialect, budgets);
  const auto sections = sections_category(h.groupoid, budgets);
  const auto& d = sections.category;
  const auto& space = c.space();
  const std::size_t n = c.open_count();
  const OpenId full = space.full_id();

  auto fail = [&](const std::string& equation, nlohmann::json w) {
    w["equation"] = equation;
    throw Error(ErrorKind::WitnessFailed, "round trip breaks " + equation, std::move(w));
  };

  PseudogroupIso iso;
  iso.hom_map.resize(n * n);
  iso.hom_inverse.resize(n * n);
  std::size_t total = 0;
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      const std::size_t slot = u * n + v;
      std::unordered_map<std::vector<std::size_t>, HomId, IndexVectorHash> index;
      for (HomId k = 0; k < d.hom_size(u, v); ++k) index.emplace(sections.sections[slot][k], k);
      const nlohmann::json where = {{"U", open_json(space, u)}, {"V", open_json(space, v)}};
      if (d.hom_size(u, v) != c.hom_size(u, v))
        fail("bijection", {{"where", where}, {"source", c.hom_size(u, v)}, {"target", d.hom_size(u, v)}});
      iso.hom_inverse[slot].assign(c.hom_size(u, v), 0);
      std::vector<bool> used(c.hom_size(u, v), false);
      for (HomId f = 0; f < c.hom_size(u, v); ++f) {
        std::vector<std::size_t> values;
        space.open(u).for_each([&](std::size_t x) {
          const OpenId ux = space.minimal_open_id(x);
          values.push_back(h.bundle.germ_index(x, c.extend(ux, v, full, c.restrict(u, v, ux, f))));
        });
        const auto it = index.find(values);
        if (it == index.end()) fail("germ section", {{"where", where}, {"f", c.homs(u, v)[f]}});
        if (used[it->second]) fail("bijection", {{"where", where}, {"f", c.homs(u, v)[f]}});
        used[it->second] = true;
        iso.hom_map[slot].push_back(it->second);
        iso.hom_inverse[slot][it->second] = f;
        ++total;
      }
    }
  }
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      const auto& fmap = iso.hom_map[u * n + v];
      if (const auto inc = c.incl(u, v); inc && fmap[*inc] != *d.incl(u, v))
        fail("incl", {{"U", open_json(space, u)}, {"V", open_json(space, v)}});
      for (OpenId w = 0; w < n; ++w) {
        const auto& gmap = iso.hom_map[v * n + w];
        const auto& hmap = iso.hom_map[u * n + w];
        for (HomId g = 0; g < c.hom_size(v, w); ++g)
          for (HomId f = 0; f < c.hom_size(u, v); ++f)
            if (hmap[c.compose(u, v, w, g, f)] != d.compose(u, v, w, gmap[g], fmap[f]))
              fail("compose", {{"f", c.homs(u, v)[f]}, {"g", c.homs(v, w)[g]}});
      }
    }
  iso.summary = {{"dialect", to_string(dialect)}, {"morphisms", total}, {"germs", h.groupoid.arrow_count()}};
  return iso;
}

PpgMorphism PpgMorphism::identity(const PrePseudogroup& c) {
  PpgMorphism m;
  const std::size_t n = c.open_count();
  m.components.resize(n * n);
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      auto& comp = m.components[u * n + v];
      comp.resize(c.hom_size(u, v));
      std::iota(comp.begin(), comp.end(), HomId{0});
    }
  return m;
}

TransportedFunctor transport_morphism(const PrePseudogroup& c, const PrePseudogroup& d, const PpgMorphism& phi,
                                      Dialect dialect, const Budgets& budgets) {
  const auto hc = groupoid_from_pseudogroup(c, dialect, budgets);
  const auto hd = groupoid_from_pseudogroup(d, dialect, budgets);
  const auto& space = c.space();
  const std::size_t n = c.open_count();
  const OpenId full = space.full_id();
  const auto& gc = hc.groupoid;
  const auto& gd = hd.groupoid;
  TransportedFunctor out;
  out.arrow_map.resize(gc.arrow_count());
  for (std::size_t i = 0; i < gc.arrow_count(); ++i) {
    const auto [x, a] = hc.bundle.germs[i];
    out.arrow_map[i] = hd.bundle.germ_index(x, phi(space.minimal_open_id(x) * n + full, static_cast<HomId>(a)));
  }
  auto& r = out.report;
  const auto cont = check_continuous(PointMap(gc.arrows, gc.arrows->all(), gd.arrows, gd.arrows->all(), out.arrow_map));
  if (!cont.ok) r.add("continuity", "germwise map is not continuous");
  for (std::size_t i = 0; i < gc.arrow_count(); ++i) {
    const std::size_t m = out.arrow_map[i];
    if (gd.source[m] != gc.source[i] || gd.target[m] != gc.target[i])
      add_capped(r, "endpoints", "germwise map moves source or target", {{"arrow", gc.name(i)}});
  }
  if (!r.ok()) return out;
  for (std::size_t x = 0; x < space.size(); ++x)
    if (out.arrow_map[gc.unit[x]] != gd.unit[x]) add_capped(r, "units", "unit germ not preserved", {{"point", space.label(x)}});
  for (std::size_t a = 0; a < gc.arrow_count(); ++a)
    for (std::size_t b = 0; b < gc.arrow_count(); ++b) {
      const auto ab = gc.compose(a, b);
      if (ab && out.arrow_map[*ab] != *gd.compose(out.arrow_map[a], out.arrow_map[b]))
        add_capped(r, "composition", "germ composition not preserved", {{"g", gc.name(a)}, {"f", gc.name(b)}});
    }
  return out;
}

}  // namespace etale
