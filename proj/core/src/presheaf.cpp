#include "etale/presheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace etale {
namespace {

std::string family_label(const std::vector<std::string>* stalk_labels, const std::vector<std::size_t>& points,
                         const std::vector<SectionId>& family) {
  std::string out = "[";
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i) out += ';';
    out += stalk_labels[points[i]][family[i]];
  }
  return out + "]";
}

/// Opens sorted by increasing size, ties in canonical order.
std::vector<OpenId> opens_by_size(const FiniteSpace& space) {
  std::vector<OpenId> ids(space.open_count());
  std::iota(ids.begin(), ids.end(), OpenId{0});
  std::stable_sort(ids.begin(), ids.end(),
                   [&](OpenId a, OpenId b) { return space.open(a).size() < space.open(b).size(); });
  return ids;
}

}  // namespace

Presheaf::Presheaf(SpacePtr space, std::vector<std::vector<std::string>> sections,
                   std::vector<std::vector<SectionId>> restrictions)
    : space_(std::move(space)), sections_(std::move(sections)), restrictions_(std::move(restrictions)) {
  const std::size_t n = space_->open_count();
  if (sections_.size() != n || restrictions_.size() != n * n)
    throw Error(ErrorKind::SchemaError, "presheaf tables do not match the open lattice");
  for (OpenId from = 0; from < n; ++from) {
    for (OpenId to = 0; to < n; ++to) {
      const auto& r = restrictions_[slot(from, to)];
      if (!space_->open(to).subset_of(space_->open(from))) {
        if (!r.empty()) throw Error(ErrorKind::SchemaError, "restriction between non-nested opens");
        continue;
      }
      const nlohmann::json where = {{"from", space_->to_labels(space_->open(from))},
                                    {"to", space_->to_labels(space_->open(to))}};
      if (r.size() != sections_[from].size())
        throw Error(ErrorKind::SchemaError, "restriction is not total", where);
      for (auto v : r)
        if (v >= sections_[to].size()) throw Error(ErrorKind::SchemaError, "restriction leaves sections(U')", where);
    }
  }
}

Presheaf Presheaf::from_function(SpacePtr space, std::vector<std::vector<std::string>> sections,
                                 const RestrictFn& fn) {
  const std::size_t n = space->open_count();
  std::vector<std::vector<SectionId>> restrictions(n * n);
  for (OpenId from = 0; from < n; ++from) {
    for (OpenId to = 0; to < n; ++to) {
      if (!space->open(to).subset_of(space->open(from))) continue;
      auto& r = restrictions[from * n + to];
      for (SectionId s = 0; s < sections[from].size(); ++s) r.push_back(fn(from, to, s));
    }
  }
  return Presheaf(std::move(space), std::move(sections), std::move(restrictions));
}

std::optional<SectionId> Presheaf::find(OpenId u, const std::string& label) const {
  const auto& s = sections_[u];
  auto it = std::find(s.begin(), s.end(), label);
  if (it == s.end()) return std::nullopt;
  return static_cast<SectionId>(it - s.begin());
}

PresheafMorphism PresheafMorphism::identity(const Presheaf& p) {
  PresheafMorphism m;
  for (OpenId u = 0; u < p.open_count(); ++u) {
    std::vector<SectionId> c(p.section_count(u));
    std::iota(c.begin(), c.end(), SectionId{0});
    m.components.push_back(std::move(c));
  }
  return m;
}

CheckReport check_presheaf(const Presheaf& p) {
  CheckReport report;
  const auto& space = p.space();
  const std::size_t n = p.open_count();
  for (OpenId u = 0; u < n; ++u) {
    for (SectionId s = 0; s < p.section_count(u); ++s) {
      if (p.restrict(u, u, s) != s)
        report.add("identity", "restriction along U within U is not the identity",
                   {{"open", space.to_labels(space.open(u))}, {"section", p.sections(u)[s]}});
    }
  }
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      if (!space.open(v).subset_of(space.open(u))) continue;
      for (OpenId w = 0; w < n; ++w) {
        if (!space.open(w).subset_of(space.open(v))) continue;
        for (SectionId s = 0; s < p.section_count(u); ++s) {
          if (p.restrict(v, w, p.restrict(u, v, s)) != p.restrict(u, w, s))
            report.add("functoriality", "restrictions do not compose along a chain",
                       {{"chain",
                         {space.to_labels(space.open(w)), space.to_labels(space.open(v)), space.to_labels(space.open(u))}},
                        {"section", p.sections(u)[s]}});
        }
      }
    }
  }
  return report;
}

CheckReport check_presheaf_morphism(const Presheaf& source, const Presheaf& target, const PresheafMorphism& phi) {
  CheckReport report;
  const auto& space = source.space();
  const std::size_t n = source.open_count();
  if (phi.components.size() != n || target.open_count() != n) {
    report.add("shape", "component count does not match the open lattice");
    return report;
  }
  for (OpenId u = 0; u < n; ++u) {
    if (phi.components[u].size() != source.section_count(u)) {
      report.add("shape", "component is not total", {{"open", space.to_labels(space.open(u))}});
      return report;
    }
    for (auto v : phi.components[u])
      if (v >= target.section_count(u)) {
        report.add("shape", "component leaves the target", {{"open", space.to_labels(space.open(u))}});
        return report;
      }
  }
  for (OpenId u = 0; u < n; ++u) {
    for (OpenId v = 0; v < n; ++v) {
      if (!space.open(v).subset_of(space.open(u))) continue;
      for (SectionId s = 0; s < source.section_count(u); ++s) {
        if (phi(v, source.restrict(u, v, s)) != target.restrict(u, v, phi(u, s)))
          report.add("naturality", "component maps do not commute with restriction",
                     {{"from", space.to_labels(space.open(u))},
                      {"to", space.to_labels(space.open(v))},
                      {"section", source.sections(u)[s]}});
      }
    }
  }
  return report;
}

SheafResult is_sheaf(const Presheaf& p, SheafMode mode, const Budgets& budgets) {
  const auto& space = p.space();
  const CoverMode cover_mode = mode == SheafMode::Canonical ? CoverMode::Canonical : CoverMode::Irredundant;
  for (OpenId u = 0; u < p.open_count(); ++u) {
    const PointSet& open = space.open(u);
    for (const auto& cover : enumerate_covers(space, open, cover_mode, budgets)) {
      const std::size_t k = cover.size();
      std::vector<OpenId> members(k);
      for (std::size_t i = 0; i < k; ++i) members[i] = space.open_id(cover[i]);
      std::vector<OpenId> meets(k * k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) meets[i * k + j] = space.open_id(cover[i] & cover[j]);

      std::unordered_map<std::vector<SectionId>, std::size_t, IndexVectorHash> gluings;
      for (SectionId s = 0; s < p.section_count(u); ++s) {
        std::vector<SectionId> tuple(k);
        for (std::size_t i = 0; i < k; ++i) tuple[i] = p.restrict(u, members[i], s);
        ++gluings[tuple];
      }

      std::vector<SectionId> family(k);
      std::optional<SheafWitness> witness;
      std::function<void(std::size_t)> extend = [&](std::size_t i) {
        if (witness) return;
        if (i == k) {
          auto it = gluings.find(family);
          const std::size_t count = it == gluings.end() ? 0 : it->second;
          if (count != 1) witness = SheafWitness{open, cover, family, count};
          return;
        }
        for (SectionId s = 0; s < p.section_count(members[i]) && !witness; ++s) {
          bool matches = true;
          for (std::size_t j = 0; j < i && matches; ++j) {
            const OpenId meet = meets[i * k + j];
            matches = p.restrict(members[i], meet, s) == p.restrict(members[j], meet, family[j]);
          }
          if (!matches) continue;
          family[i] = s;
          extend(i + 1);
        }
      };
      extend(0);
      if (witness) return SheafResult{false, witness};
    }
  }
  return SheafResult{};
}

nlohmann::json to_json(const FiniteSpace& space, const SheafWitness& w) {
  nlohmann::json cover = nlohmann::json::array();
  for (const auto& c : w.cover) cover.push_back(space.to_labels(c));
  return {{"open", space.to_labels(w.open)}, {"cover", cover}, {"family", w.family}, {"gluings", w.gluings}};
}

const std::vector<std::string>& stalk(const Presheaf& p, std::size_t x) {
  if (x >= p.space().size()) throw Error(ErrorKind::UnknownPoint, "stalk at an unknown point", {{"index", x}});
  return p.sections(p.space().minimal_open_id(x));
}

SectionId germ_at(const Presheaf& p, OpenId u, SectionId s, std::size_t x) {
  return p.restrict(u, p.space().minimal_open_id(x), s);
}

EtaleSpaceBundle etale_space(const Presheaf& p) {
  const auto& base = p.space();
  EtaleSpaceBundle bundle;
  for (std::size_t x = 0; x < base.size(); ++x) {
    bundle.first_germ.push_back(bundle.germs.size());
    for (SectionId a = 0; a < stalk(p, x).size(); ++a) bundle.germs.push_back({x, a});
  }
  if (bundle.germs.size() > kMaxPoints)
    throw Error(ErrorKind::BudgetExceeded, "too many germs for the total space", {{"germs", bundle.germs.size()}});

  std::vector<int> labels(bundle.germs.size());
  std::vector<PointSet> minimal(bundle.germs.size());
  std::vector<std::size_t> over(bundle.germs.size());
  for (std::size_t i = 0; i < bundle.germs.size(); ++i) {
    labels[i] = static_cast<int>(i);
    const auto [x, a] = bundle.germs[i];
    over[i] = x;
    // The smallest basic open around the germ of a at x is [a, U_x].
    const OpenId ux = base.minimal_open_id(x);
    base.minimal_open(x).for_each(
        [&](std::size_t y) { minimal[i].insert(bundle.germ_index(y, p.restrict(ux, base.minimal_open_id(y), a))); });
  }
  bundle.total = share(FiniteSpace::from_minimal_opens(std::move(labels), std::move(minimal)));
  bundle.projection = PointMap(bundle.total, bundle.total->all(), p.space_ptr(), base.all(), std::move(over));
  return bundle;
}

PointSet basic_open(const Presheaf& p, const EtaleSpaceBundle& bundle, OpenId u, SectionId f) {
  PointSet out;
  p.space().open(u).for_each([&](std::size_t x) { out.insert(bundle.germ_index(x, germ_at(p, u, f, x))); });
  return out;
}

Presheaf skyscraper(const SpacePtr& space, std::size_t x, const std::vector<std::string>& stalk_set) {
  if (stalk_set.empty()) throw Error(ErrorKind::EmptyStalkRejected, "skyscraper stalks must be non-empty");
  if (x >= space->size()) throw Error(ErrorKind::UnknownPoint, "skyscraper at an unknown point", {{"index", x}});
  std::vector<std::vector<std::string>> sections;
  for (const auto& u : space->opens())
    sections.push_back(u.contains(x) ? stalk_set : std::vector<std::string>{kSkyscraperSentinel});
  return Presheaf::from_function(space, std::move(sections), [&](OpenId, OpenId to, SectionId s) {
    return space->open(to).contains(x) ? s : SectionId{0};
  });
}

Presheaf product_presheaf(const SpacePtr& space, const std::vector<Presheaf>& factors) {
  for (const auto& f : factors)
    if (!(f.space() == *space)) throw Error(ErrorKind::SchemaError, "product factors live on different spaces");
  const std::size_t n = space->open_count();
  // Mixed-radix encoding with the first factor as the most significant digit.
  std::vector<std::vector<std::string>> sections(n);
  for (OpenId u = 0; u < n; ++u) {
    std::size_t count = 1;
    for (const auto& f : factors) count *= f.section_count(u);
    for (std::size_t code = 0; code < count; ++code) {
      std::string label = "[";
      std::size_t rest = code;
      std::vector<std::string> parts(factors.size());
      for (std::size_t k = factors.size(); k-- > 0;) {
        const std::size_t m = factors[k].section_count(u);
        parts[k] = factors[k].sections(u)[rest % m];
        rest /= m;
      }
      for (std::size_t k = 0; k < parts.size(); ++k) label += (k ? ";" : "") + parts[k];
      sections[u].push_back(label + "]");
    }
  }
  return Presheaf::from_function(space, std::move(sections), [&](OpenId from, OpenId to, SectionId s) {
    std::vector<SectionId> digits(factors.size());
    std::size_t rest = s;
    for (std::size_t k = factors.size(); k-- > 0;) {
      const std::size_t m = factors[k].section_count(from);
      digits[k] = rest % m;
      rest /= m;
    }
    SectionId out = 0;
    for (std::size_t k = 0; k < factors.size(); ++k)
      out = out * factors[k].section_count(to) + factors[k].restrict(from, to, digits[k]);
    return out;
  });
}

namespace {

struct FamilyTables {
  std::vector<std::vector<std::size_t>> points;  // points of each open, ascending
  std::vector<std::vector<std::size_t>> position;  // position[u][x] inside points[u]
};

FamilyTables family_tables(const FiniteSpace& space) {
  FamilyTables t;
  for (const auto& u : space.opens()) {
    t.points.push_back(u.elements());
    std::vector<std::size_t> pos(space.size(), 0);
    for (std::size_t i = 0; i < t.points.back().size(); ++i) pos[t.points.back()[i]] = i;
    t.position.push_back(std::move(pos));
  }
  return t;
}

std::vector<SectionId> project(const FamilyTables& t, OpenId from, OpenId to, const std::vector<SectionId>& family) {
  std::vector<SectionId> out;
  out.reserve(t.points[to].size());
  for (auto x : t.points[to]) out.push_back(family[t.position[from][x]]);
  return out;
}

using FamilySet = std::unordered_set<std::vector<SectionId>, IndexVectorHash>;

Presheaf presheaf_of_families(const SpacePtr& space, const FamilyTables& t,
                              const std::vector<std::vector<std::string>>& stalks,
                              std::vector<std::vector<std::vector<SectionId>>>& families) {
  const std::size_t n = space->open_count();
  std::vector<std::unordered_map<std::vector<SectionId>, SectionId, IndexVectorHash>> index(n);
  std::vector<std::vector<std::string>> sections(n);
  for (OpenId u = 0; u < n; ++u) {
    std::sort(families[u].begin(), families[u].end());
    for (SectionId k = 0; k < families[u].size(); ++k) {
      index[u].emplace(families[u][k], k);
      sections[u].push_back(family_label(stalks.data(), t.points[u], families[u][k]));
    }
  }
  return Presheaf::from_function(space, std::move(sections), [&](OpenId from, OpenId to, SectionId s) {
    return index[to].at(project(t, from, to, families[from][s]));
  });
}

}  // namespace

Presheaf sharp_presheaf(const Presheaf& p) {
  const auto& space = p.space();
  const auto t = family_tables(space);
  std::vector<std::vector<std::string>> stalks;
  for (std::size_t x = 0; x < space.size(); ++x) stalks.push_back(stalk(p, x));
  std::vector<std::vector<std::vector<SectionId>>> families(space.open_count());
  for (OpenId u = 0; u < space.open_count(); ++u) {
    const auto& pts = t.points[u];
    std::vector<SectionId> family(pts.size());
    std::function<void(std::size_t)> fill = [&](std::size_t i) {
      if (i == pts.size()) {
        families[u].push_back(family);
        return;
      }
      for (SectionId a = 0; a < stalks[pts[i]].size(); ++a) {
        family[i] = a;
        fill(i + 1);
      }
    };
    fill(0);
  }
  return presheaf_of_families(p.space_ptr(), t, stalks, families);
}

Sheafification sheafify(const Presheaf& p) {
  const auto& space = p.space();
  const std::size_t n = space.open_count();
  const auto t = family_tables(space);
  std::vector<std::vector<std::string>> stalks;
  for (std::size_t x = 0; x < space.size(); ++x) stalks.push_back(stalk(p, x));

  auto canonical = [&](OpenId u, SectionId s) {
    std::vector<SectionId> family;
    for (auto x : t.points[u]) family.push_back(germ_at(p, u, s, x));
    return family;
  };

  std::vector<FamilySet> current(n);
  for (OpenId u = 0; u < n; ++u)
    for (SectionId s = 0; s < p.section_count(u); ++s) current[u].insert(canonical(u, s));

  auto order = opens_by_size(space);
  std::reverse(order.begin(), order.end());

  Sheafification out;
  bool changed = true;
  while (changed) {
    changed = false;
    ++out.passes;
    for (OpenId u : order) {
      const auto& pts = t.points[u];
      // The restriction to U_x is complete once the last point of U_x is assigned.
      std::vector<std::vector<std::size_t>> due(pts.size());
      std::vector<std::vector<SectionId>> candidates(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const OpenId ux = space.minimal_open_id(pts[i]);
        std::size_t last = 0;
        for (auto y : t.points[ux]) last = std::max(last, t.position[u][y]);
        due[last].push_back(ux);
        std::vector<bool> seen(stalks[pts[i]].size(), false);
        for (const auto& f : current[ux]) seen[f[t.position[ux][pts[i]]]] = true;
        for (SectionId a = 0; a < seen.size(); ++a)
          if (seen[a]) candidates[i].push_back(a);
      }
      std::vector<SectionId> family(pts.size());
      std::vector<std::vector<SectionId>> added;
      std::function<void(std::size_t)> extend = [&](std::size_t i) {
        if (i == pts.size()) {
          if (!current[u].contains(family)) added.push_back(family);
          return;
        }
        for (SectionId a : candidates[i]) {
          family[i] = a;
          bool ok = true;
          for (OpenId ux : due[i]) {
            if (!current[ux].contains(project(t, u, ux, family))) {
              ok = false;
              break;
            }
          }
          if (ok) extend(i + 1);
        }
      };
      extend(0);
      for (auto& f : added) current[u].insert(std::move(f));
      changed = changed || !added.empty();
    }
  }

  out.families.resize(n);
  for (OpenId u = 0; u < n; ++u) out.families[u].assign(current[u].begin(), current[u].end());
  out.sheaf = presheaf_of_families(p.space_ptr(), t, stalks, out.families);

  std::vector<std::unordered_map<std::vector<SectionId>, SectionId, IndexVectorHash>> index(n);
  for (OpenId u = 0; u < n; ++u)
    for (SectionId k = 0; k < out.families[u].size(); ++k) index[u].emplace(out.families[u][k], k);
  for (OpenId u = 0; u < n; ++u) {
    std::vector<SectionId> component;
    for (SectionId s = 0; s < p.section_count(u); ++s) component.push_back(index[u].at(canonical(u, s)));
    out.unit.components.push_back(std::move(component));
  }
  return out;
}

StalkIsoResult check_morphism_stalkwise_iso(const Presheaf& source, const Presheaf& target,
                                            const PresheafMorphism& phi, const Budgets& budgets) {
  if (!is_sheaf(source, SheafMode::Canonical, budgets).ok)
    throw Error(ErrorKind::NotASheaf, "source of the morphism is not a sheaf");
  if (!is_sheaf(target, SheafMode::Canonical, budgets).ok)
    throw Error(ErrorKind::NotASheaf, "target of the morphism is not a sheaf");
  auto bijective = [&](OpenId u) {
    if (source.section_count(u) != target.section_count(u)) return false;
    std::vector<bool> hit(target.section_count(u), false);
    for (SectionId s = 0; s < source.section_count(u); ++s) {
      if (hit[phi(u, s)]) return false;
      hit[phi(u, s)] = true;
    }
    return true;
  };
  StalkIsoResult result;
  const auto& space = source.space();
  for (std::size_t x = 0; x < space.size(); ++x) {
    if (!bijective(space.minimal_open_id(x))) {
      result.stalkwise_iso = false;
      if (!result.failing_point) result.failing_point = x;
    }
  }
  for (OpenId u = 0; u < source.open_count(); ++u) {
    if (!bijective(u)) {
      result.openwise_iso = false;
      if (!result.failing_open) result.failing_open = u;
    }
  }
  return result;
}

PresheafUniversality check_presheaf_universality(const Presheaf& p, const Sheafification& hat, const Presheaf& g,
                                                 const PresheafMorphism& phi, const Budgets& budgets) {
  const auto& space = p.space();
  const std::size_t n = space.open_count();
  const auto& f = hat.sheaf;
  PresheafUniversality out;

  // Constructive factorization: glue the images of the germs in g.
  std::vector<std::vector<SectionId>> preimage_at_minimal(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) {
    const OpenId ux = space.minimal_open_id(x);
    preimage_at_minimal[x].assign(f.section_count(ux), SectionId(-1));
    for (SectionId s = 0; s < p.section_count(ux); ++s) preimage_at_minimal[x][hat.unit(ux, s)] = s;
  }
  out.psi.components.resize(n);
  for (OpenId u = 0; u < n; ++u) {
    for (SectionId a = 0; a < f.section_count(u); ++a) {
      std::optional<SectionId> glued;
      for (SectionId c = 0; c < g.section_count(u) && !glued; ++c) {
        bool matches = true;
        space.open(u).for_each([&](std::size_t x) {
          const OpenId ux = space.minimal_open_id(x);
          const SectionId s = preimage_at_minimal[x][f.restrict(u, ux, a)];
          if (s == SectionId(-1) || g.restrict(u, ux, c) != phi(ux, s)) matches = false;
        });
        if (matches) glued = c;
      }
      if (!glued)
        throw Error(ErrorKind::NoFactorization, "germ images do not glue in the target sheaf",
                    {{"open", space.to_labels(space.open(u))}, {"section", f.sections(u)[a]}});
      out.psi.components[u].push_back(*glued);
    }
  }

  // Bounded enumeration of every factorization.
  const auto order = opens_by_size(space);
  std::vector<std::vector<SectionId>> forced(n);
  for (OpenId u = 0; u < n; ++u) {
    forced[u].assign(f.section_count(u), SectionId(-1));
    for (SectionId s = 0; s < p.section_count(u); ++s) {
      auto& slot = forced[u][hat.unit(u, s)];
      if (slot != SectionId(-1) && slot != phi(u, s)) return out;  // phi does not factor at all
      slot = phi(u, s);
    }
  }
  std::vector<std::pair<OpenId, SectionId>> vars;
  for (OpenId u : order)
    for (SectionId a = 0; a < f.section_count(u); ++a) vars.emplace_back(u, a);
  std::vector<std::vector<SectionId>> psi(n);
  for (OpenId u = 0; u < n; ++u) psi[u].assign(f.section_count(u), 0);
  std::size_t nodes = 0;
  std::function<void(std::size_t)> search = [&](std::size_t k) {
    if (out.solutions >= 2 || !out.exhausted) return;
    if (++nodes > budgets.search_nodes) {
      out.exhausted = false;
      return;
    }
    if (k == vars.size()) {
      ++out.solutions;
      return;
    }
    const auto [u, a] = vars[k];
    for (SectionId c = 0; c < g.section_count(u); ++c) {
      if (forced[u][a] != SectionId(-1) && forced[u][a] != c) continue;
      bool natural = true;
      for (OpenId v = 0; v < n && natural; ++v) {
        if (v == u || !space.open(v).subset_of(space.open(u))) continue;
        natural = g.restrict(u, v, c) == psi[v][f.restrict(u, v, a)];
      }
      if (!natural) continue;
      psi[u][a] = c;
      search(k + 1);
    }
  };
  search(0);
  return out;
}

}  // namespace etale

namespace etale {

CheckReport check_unit_stalks(const Presheaf& p, const Sheafification& hat) {
  CheckReport out;
  const auto& space = p.space();
  for (std::size_t x = 0; x < space.size(); ++x) {
    const OpenId ux = space.minimal_open_id(x);
    std::vector<bool> hit(hat.sheaf.section_count(ux), false);
    bool injective = true;
    for (SectionId s = 0; s < p.section_count(ux); ++s) {
      const SectionId t = hat.unit(ux, s);
      if (hit[t]) injective = false;
      hit[t] = true;
    }
    const bool surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    if ((!injective || !surjective) && out.violations.size() < 16)
      out.add("unit stalks", injective ? "germ of the sheafification missed by the unit" : "germs identified by the unit",
              {{"point", space.label(x)}});
  }
  return out;
}

}  // namespace etale
