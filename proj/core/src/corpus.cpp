#include "etale/corpus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace etale {
namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<int> iota_labels(std::size_t n) {
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  return labels;
}

std::string tuple_label(const std::vector<std::size_t>& values, std::size_t tag) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + std::to_string(values[i]);
  out += "]";
  if (tag) out += "#" + std::to_string(tag);
  return out;
}

/// Connected components of an open under the specialization relation, by smallest point.
std::vector<std::size_t> components(const FiniteSpace& space, const PointSet& u, std::size_t& count) {
  std::vector<std::size_t> comp(space.size(), space.size());
  count = 0;
  u.for_each([&](std::size_t x) {
    if (comp[x] != space.size()) return;
    std::vector<std::size_t> stack{x};
    comp[x] = count;
    while (!stack.empty()) {
      const std::size_t y = stack.back();
      stack.pop_back();
      u.for_each([&](std::size_t z) {
        if (comp[z] == space.size() && (space.specializes(y, z) || space.specializes(z, y))) {
          comp[z] = count;
          stack.push_back(z);
        }
      });
    }
    ++count;
  });
  return comp;
}

}  // namespace

std::vector<FiniteSpace> spaces_up_to_homeomorphism(std::size_t max_points) {
  std::vector<FiniteSpace> out;
  for (std::size_t n = 1; n <= max_points; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) pairs.push_back({i, j});
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));

    std::set<std::uint64_t> seen;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs.size()); ++code) {
      std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
      for (std::size_t i = 0; i < n; ++i) rel[i][i] = true;
      for (std::size_t k = 0; k < pairs.size(); ++k)
        if (code >> k & 1) rel[pairs[k].first][pairs[k].second] = true;
      bool transitive = true;
      for (std::size_t a = 0; a < n && transitive; ++a)
        for (std::size_t b = 0; b < n && transitive; ++b)
          for (std::size_t c = 0; c < n && transitive; ++c)
            if (rel[a][b] && rel[b][c] && !rel[a][c]) transitive = false;
      if (!transitive) continue;
      std::uint64_t canonical = code;
      for (const auto& q : perms) {
        std::uint64_t image = 0;
        for (std::size_t k = 0; k < pairs.size(); ++k)
          if (rel[q[pairs[k].first]][q[pairs[k].second]]) image |= std::uint64_t{1} << k;
        canonical = std::min(canonical, image);
      }
      if (!seen.insert(canonical).second) continue;
      out.push_back(FiniteSpace::from_preorder(iota_labels(n), [&](std::size_t x, std::size_t y) { return rel[x][y]; }));
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> automorphisms(const FiniteSpace& space) {
  const std::size_t n = space.size();
  if (n > 8) throw Error(ErrorKind::BudgetExceeded, "automorphism search limited to 8 points");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      for (std::size_t y = 0; y < n && ok; ++y) ok = space.specializes(x, y) == space.specializes(p[x], p[y]);
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

TopGroupoid unit_groupoid(const SpacePtr& space) {
  TopGroupoid g;
  const std::size_t n = space->size();
  g.base = space;
  g.arrows = space;
  g.source.resize(n);
  std::iota(g.source.begin(), g.source.end(), std::size_t{0});
  g.target = g.unit = g.inverse = g.source;
  g.comp.assign(n * n, std::nullopt);
  for (std::size_t a = 0; a < n; ++a) g.comp[a * n + a] = a;
  return g;
}

TopGroupoid action_groupoid(const SpacePtr& space, const std::vector<std::vector<std::size_t>>& acting,
                            const GroupTable& kernel) {
  const std::size_t n = space->size();
  const std::size_t nh = acting.size();
  const std::size_t nk = kernel.order();
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t h = 0; h < nh; ++h) index.emplace(acting[h], h);
  auto mul_h = [&](std::size_t a, std::size_t b) {
    std::vector<std::size_t> p(n);
    for (std::size_t x = 0; x < n; ++x) p[x] = acting[a][acting[b][x]];
    const auto it = index.find(p);
    if (it == index.end()) throw Error(ErrorKind::SchemaError, "acting permutations are not closed under composition");
    return it->second;
  };
  std::size_t id_h = nh;
  for (std::size_t h = 0; h < nh; ++h) {
    bool id = true;
    for (std::size_t x = 0; x < n && id; ++x) id = acting[h][x] == x;
    if (id) id_h = h;
  }
  if (id_h == nh) throw Error(ErrorKind::SchemaError, "acting permutations miss the identity");

  const std::size_t count = nh * nk * n;
  auto arrow = [&](std::size_t h, std::size_t k, std::size_t x) { return (h * nk + k) * n + x; };
  std::vector<PointSet> minimal(count);
  TopGroupoid g;
  g.base = space;
  g.source.resize(count);
  g.target.resize(count);
  g.inverse.resize(count);
  for (std::size_t h = 0; h < nh; ++h)
    for (std::size_t k = 0; k < nk; ++k)
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t a = arrow(h, k, x);
        space->minimal_open(x).for_each([&](std::size_t y) { minimal[a].insert(arrow(h, k, y)); });
        g.source[a] = x;
        g.target[a] = acting[h][x];
        std::size_t hinv = 0;
        for (std::size_t c = 0; c < nh; ++c)
          if (mul_h(c, h) == id_h) hinv = c;
        g.inverse[a] = arrow(hinv, kernel.inverse[k], acting[h][x]);
      }
  g.arrows = share(FiniteSpace::from_minimal_opens(iota_labels(count), std::move(minimal)));
  g.unit.resize(n);
  for (std::size_t x = 0; x < n; ++x) g.unit[x] = arrow(id_h, kernel.identity, x);
  g.comp.assign(count * count, std::nullopt);
  for (std::size_t h1 = 0; h1 < nh; ++h1)
    for (std::size_t k1 = 0; k1 < nk; ++k1)
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t h2 = 0; h2 < nh; ++h2)
          for (std::size_t k2 = 0; k2 < nk; ++k2)
            g.comp[arrow(h2, k2, acting[h1][x]) * count + arrow(h1, k1, x)] =
                arrow(mul_h(h2, h1), kernel.mul[k2][k1], x);
  return g;
}

TopGroupoid pair_groupoid(std::size_t n) {
  std::vector<std::vector<std::size_t>> rotations;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::size_t> p(n);
    for (std::size_t x = 0; x < n; ++x) p[x] = (x + r) % n;
    rotations.push_back(p);
  }
  return action_groupoid(share(FiniteSpace::discrete(n)), rotations, cyclic_group(1));
}

TopGroupoid group_groupoid(const GroupTable& group) {
  return action_groupoid(share(FiniteSpace::discrete(1)), {{0}}, group);
}

TopGroupoid disjoint_union(const std::vector<TopGroupoid>& parts) {
  std::vector<PointSet> base_min, arrow_min;
  TopGroupoid g;
  std::size_t base_off = 0, arrow_off = 0;
  std::vector<std::size_t> arrow_offsets;
  for (const auto& p : parts) {
    arrow_offsets.push_back(arrow_off);
    for (std::size_t x = 0; x < p.base_size(); ++x) {
      PointSet m;
      p.base->minimal_open(x).for_each([&](std::size_t y) { m.insert(y + base_off); });
      base_min.push_back(m);
      g.unit.push_back(p.unit[x] + arrow_off);
    }
    for (std::size_t a = 0; a < p.arrow_count(); ++a) {
      PointSet m;
      p.arrows->minimal_open(a).for_each([&](std::size_t b) { m.insert(b + arrow_off); });
      arrow_min.push_back(m);
      g.source.push_back(p.source[a] + base_off);
      g.target.push_back(p.target[a] + base_off);
      g.inverse.push_back(p.inverse[a] + arrow_off);
      g.names.push_back(std::to_string(arrow_off + a));
    }
    base_off += p.base_size();
    arrow_off += p.arrow_count();
  }
  g.names.clear();
  g.base = share(FiniteSpace::from_minimal_opens(iota_labels(base_off), std::move(base_min)));
  g.arrows = share(FiniteSpace::from_minimal_opens(iota_labels(arrow_off), std::move(arrow_min)));
  g.comp.assign(arrow_off * arrow_off, std::nullopt);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    const std::size_t off = arrow_offsets[i];
    for (std::size_t a = 0; a < p.arrow_count(); ++a)
      for (std::size_t b = 0; b < p.arrow_count(); ++b)
        if (const auto c = p.compose(a, b)) g.comp[(a + off) * arrow_off + b + off] = *c + off;
  }
  return g;
}

TopGroupoid relabel_arrows(const TopGroupoid& g, const std::vector<std::size_t>& perm) {
  const std::size_t n = g.arrow_count();
  TopGroupoid out;
  out.base = g.base;
  out.unit.resize(g.base_size());
  for (std::size_t x = 0; x < g.base_size(); ++x) out.unit[x] = perm[g.unit[x]];
  std::vector<PointSet> minimal(n);
  out.source.resize(n);
  out.target.resize(n);
  out.inverse.resize(n);
  if (!g.names.empty()) out.names.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    g.arrows->minimal_open(a).for_each([&](std::size_t b) { minimal[perm[a]].insert(perm[b]); });
    out.source[perm[a]] = g.source[a];
    out.target[perm[a]] = g.target[a];
    out.inverse[perm[a]] = perm[g.inverse[a]];
    if (!g.names.empty()) out.names[perm[a]] = g.names[a];
  }
  out.arrows = share(FiniteSpace::from_minimal_opens(iota_labels(n), std::move(minimal)));
  out.comp.assign(n * n, std::nullopt);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (const auto c = g.compose(a, b)) out.comp[perm[a] * n + perm[b]] = perm[*c];
  return out;
}

TopGroupoid shuffle_arrows(const TopGroupoid& g, Rng& rng) {
  std::vector<std::size_t> perm(g.arrow_count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return relabel_arrows(g, perm);
}

std::vector<CorpusGroupoid> exhaustive_etale_groupoids(std::size_t max_base, std::size_t max_arrows,
                                                       std::uint64_t seed) {
  const auto& catalog = group_catalog();
  Rng rng(seed);
  std::vector<CorpusGroupoid> out;
  // Connected étale groupoids over a discrete base are pair groupoids times a group.
  struct Block {
    std::size_t points;
    std::size_t group;
  };
  std::vector<Block> blocks;
  std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)> rec =
      [&](std::size_t left, std::size_t arrows_left, std::size_t max_size, std::size_t min_group) {
        if (left == 0) {
          std::vector<TopGroupoid> parts;
          std::string name = "discrete";
          for (const auto& b : blocks) {
            std::vector<std::vector<std::size_t>> rotations;
            for (std::size_t r = 0; r < b.points; ++r) {
              std::vector<std::size_t> p(b.points);
              for (std::size_t x = 0; x < b.points; ++x) p[x] = (x + r) % b.points;
              rotations.push_back(p);
            }
            parts.push_back(action_groupoid(share(FiniteSpace::discrete(b.points)), rotations, catalog[b.group].table));
            name += "+pair" + std::to_string(b.points) + "x" + catalog[b.group].name;
          }
          out.push_back({name, shuffle_arrows(disjoint_union(parts), rng)});
          return;
        }
        for (std::size_t k = std::min(left, max_size); k >= 1; --k) {
          const std::size_t start = k == max_size ? min_group : 0;
          for (std::size_t gi = start; gi < catalog.size(); ++gi) {
            const std::size_t cost = k * k * catalog[gi].table.order();
            if (cost + (left - k) > arrows_left) continue;
            blocks.push_back({k, gi});
            rec(left - k, arrows_left - cost, k, gi);
            blocks.pop_back();
          }
        }
      };
  for (std::size_t n = 1; n <= max_base; ++n) rec(n, max_arrows, n, 0);
  return out;
}

std::vector<CorpusGroupoid> random_etale_groupoids(std::size_t count, std::uint64_t seed, std::size_t max_base,
                                                   std::size_t max_arrows) {
  const auto spaces = spaces_up_to_homeomorphism(max_base);
  const auto& catalog = group_catalog();
  std::vector<std::vector<std::size_t>> by_size(max_base + 1);
  for (std::size_t i = 0; i < spaces.size(); ++i) by_size[spaces[i].size()].push_back(i);
  Rng rng(seed);
  std::vector<CorpusGroupoid> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t base_left = uniform(rng, 1, max_base);
    std::size_t arrows_left = max_arrows;
    std::vector<TopGroupoid> parts;
    std::string name = "random" + std::to_string(i);
    while (base_left > 0) {
      const std::size_t m = uniform(rng, 1, base_left);
      const std::size_t si = by_size[m][uniform(rng, 0, by_size[m].size() - 1)];
      const auto space = share(spaces[si]);
      const auto auts = automorphisms(*space);
      std::vector<std::vector<std::size_t>> generators;
      for (std::size_t r = uniform(rng, 0, 2); r > 0; --r) generators.push_back(auts[uniform(rng, 0, auts.size() - 1)]);
      std::vector<std::vector<std::size_t>> acting;
      permutation_group(generators, m, acting);
      const std::size_t reserve = base_left - m;
      if (acting.size() * m + reserve > arrows_left) {
        acting.resize(1);
      }
      std::vector<std::size_t> kernels;
      for (std::size_t k = 0; k < catalog.size(); ++k)
        if (acting.size() * catalog[k].table.order() * m + reserve <= arrows_left) kernels.push_back(k);
      const std::size_t k = kernels[uniform(rng, 0, kernels.size() - 1)];
      parts.push_back(action_groupoid(space, acting, catalog[k].table));
      name += "+space" + std::to_string(si) + "h" + std::to_string(acting.size()) + "x" + catalog[k].name;
      arrows_left -= acting.size() * catalog[k].table.order() * m;
      base_left -= m;
    }
    out.push_back({name, shuffle_arrows(disjoint_union(parts), rng)});
  }
  return out;
}

Presheaf constant_presheaf(const SpacePtr& space, const std::vector<std::string>& values) {
  std::vector<std::vector<std::string>> sections(space->open_count(), values);
  return Presheaf::from_function(space, std::move(sections), [](OpenId, OpenId, SectionId s) { return s; });
}

Presheaf random_presheaf(const SpacePtr& space, Rng& rng) {
  const auto& sp = *space;
  const std::size_t n = sp.open_count();
  std::vector<std::size_t> stalk(sp.size());
  for (auto& s : stalk) s = uniform(rng, 1, 3) == 3 ? uniform(rng, 1, 3) : uniform(rng, 1, 2);
  const double density = 0.3 + 0.6 * std::uniform_real_distribution<double>(0, 1)(rng);
  const double tagging = coin(rng, 0.3) ? 0.3 : 0.0;

  using Section = std::pair<std::vector<std::size_t>, std::size_t>;
  std::vector<std::vector<Section>> chosen(n);
  std::vector<std::map<Section, std::size_t>> index(n);
  auto add = [&](OpenId u, const Section& s) {
    if (index[u].emplace(s, chosen[u].size()).second) chosen[u].push_back(s);
  };
  std::vector<OpenId> order(n);
  std::iota(order.begin(), order.end(), OpenId{0});
  std::stable_sort(order.begin(), order.end(), [&](OpenId a, OpenId b) { return sp.open(a).size() > sp.open(b).size(); });
  auto project = [&](OpenId from, OpenId to, const std::vector<std::size_t>& values) {
    std::vector<std::size_t> out;
    std::size_t i = 0;
    sp.open(from).for_each([&](std::size_t x) {
      if (sp.open(to).contains(x)) out.push_back(values[i]);
      ++i;
    });
    return out;
  };
  for (OpenId u : order) {
    for (OpenId w = 0; w < n; ++w) {
      if (w == u || !sp.open(u).subset_of(sp.open(w))) continue;
      for (const auto& [values, tag] : chosen[w]) add(u, {project(w, u, values), 0});
    }
    const auto pts = sp.open(u).elements();
    std::vector<std::size_t> digits(pts.size(), 0);
    while (true) {
      if (coin(rng, density)) {
        add(u, {digits, 0});
        if (pts.size() >= 2 && coin(rng, tagging)) add(u, {digits, 1});
      }
      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] == stalk[pts[i]]) digits[i++] = 0;
      if (i == digits.size()) break;
    }
    if (pts.empty()) add(u, {{}, 0});
  }
  std::vector<std::vector<std::string>> sections(n);
  for (OpenId u = 0; u < n; ++u)
    for (const auto& [values, tag] : chosen[u]) sections[u].push_back(tuple_label(values, tag));
  return Presheaf::from_function(space, std::move(sections), [&](OpenId from, OpenId to, SectionId s) {
    const auto& [values, tag] = chosen[from][s];
    return index[to].at({project(from, to, values), from == to ? tag : 0});
  });
}

std::vector<CorpusPresheaf> presheaf_corpus(std::uint64_t seed, std::size_t max_points, std::size_t per_space) {
  Rng rng(seed);
  std::vector<CorpusPresheaf> out;
  const auto spaces = spaces_up_to_homeomorphism(max_points);
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const auto space = share(spaces[i]);
    const std::string prefix = "space" + std::to_string(i) + ":";
    out.push_back({prefix + "constant", constant_presheaf(space, {"a", "b"})});
    out.push_back({prefix + "skyscraper", skyscraper(space, 0, {"p", "q"})});
    for (std::size_t k = 0; k < per_space; ++k)
      out.push_back({prefix + "random" + std::to_string(k), random_presheaf(space, rng)});
  }
  return out;
}

GroupSheafInput locally_constant_group_sheaf(const SpacePtr& space, const GroupTable& group) {
  const auto& sp = *space;
  const std::size_t n = sp.open_count();
  const std::size_t order = group.order();
  std::vector<std::vector<std::size_t>> comp(n);
  std::vector<std::size_t> count(n);
  std::vector<std::vector<std::string>> sections(n);
  GroupSheafInput out;
  out.groups.resize(n);
  for (OpenId u = 0; u < n; ++u) {
    comp[u] = components(sp, sp.open(u), count[u]);
    std::size_t size = 1;
    for (std::size_t c = 0; c < count[u]; ++c) size *= order;
    auto decode = [&](std::size_t code) {
      std::vector<std::size_t> digits(count[u]);
      for (std::size_t c = count[u]; c-- > 0;) {
        digits[c] = code % order;
        code /= order;
      }
      return digits;
    };
    auto encode = [&](const std::vector<std::size_t>& digits) {
      std::size_t code = 0;
      for (auto d : digits) code = code * order + d;
      return code;
    };
    auto& g = out.groups[u];
    g.mul.assign(size, std::vector<std::size_t>(size));
    g.inverse.resize(size);
    for (std::size_t a = 0; a < size; ++a) {
      const auto da = decode(a);
      sections[u].push_back(tuple_label(da, 0));
      std::vector<std::size_t> inv(count[u]);
      for (std::size_t c = 0; c < count[u]; ++c) inv[c] = group.inverse[da[c]];
      g.inverse[a] = encode(inv);
      for (std::size_t b = 0; b < size; ++b) {
        const auto db = decode(b);
        std::vector<std::size_t> prod(count[u]);
        for (std::size_t c = 0; c < count[u]; ++c) prod[c] = group.mul[da[c]][db[c]];
        g.mul[a][b] = encode(prod);
      }
    }
    g.identity = encode(std::vector<std::size_t>(count[u], group.identity));
  }
  out.presheaf = Presheaf::from_function(space, std::move(sections), [&](OpenId from, OpenId to, SectionId s) {
    std::vector<std::size_t> digits(count[from]);
    std::size_t code = s;
    for (std::size_t c = count[from]; c-- > 0;) {
      digits[c] = code % order;
      code /= order;
    }
    std::vector<std::size_t> out_digits(count[to], 0);
    sp.open(to).for_each([&](std::size_t x) { out_digits[comp[to][x]] = digits[comp[from][x]]; });
    std::size_t r = 0;
    for (auto d : out_digits) r = r * order + d;
    return r;
  });
  return out;
}

GroupSheafInput constant_group_presheaf(const SpacePtr& space, const GroupTable& group) {
  const auto& sp = *space;
  const std::size_t n = sp.open_count();
  GroupSheafInput out;
  std::vector<std::vector<std::string>> sections(n);
  out.groups.resize(n);
  for (OpenId u = 0; u < n; ++u) {
    if (sp.open(u).empty()) {
      sections[u] = {"e"};
      out.groups[u] = cyclic_group(1);
      continue;
    }
    for (std::size_t a = 0; a < group.order(); ++a) sections[u].push_back("g" + std::to_string(a));
    out.groups[u] = group;
  }
  out.presheaf = Presheaf::from_function(space, std::move(sections), [&](OpenId, OpenId to, SectionId s) {
    return sp.open(to).empty() ? SectionId{0} : s;
  });
  return out;
}

std::vector<PrePseudogroup> truncations(const PrePseudogroup& c) {
  std::vector<PrePseudogroup> out;
  const OpenId full = c.space().full_id();
  const HomId id = c.inclusion(full, full);
  for (HomId drop = 0; drop < c.hom_size(full, full); ++drop) {
    if (drop == id) continue;
    auto sub = subcategory(c, [&](OpenId u, OpenId v, HomId f) { return !(u == full && v == full && f == drop); });
    if (sub) out.push_back(std::move(*sub));
  }
  return out;
}

std::vector<CorpusPseudogroup> pseudogroup_sheaf_corpus(std::uint64_t seed, std::size_t max_points) {
  std::vector<CorpusPseudogroup> out;
  const auto spaces = spaces_up_to_homeomorphism(max_points);
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const auto space = share(spaces[i]);
    const auto dialect = dialect_for(*space);
    const std::string prefix = "space" + std::to_string(i) + ":";
    out.push_back({prefix + "homeo", build_homeo_l(space), dialect});
    out.push_back({prefix + "groups-Z2", from_group_sheaf(locally_constant_group_sheaf(space, cyclic_group(2))), dialect});
    if (space->size() <= 2)
      out.push_back({prefix + "groups-Z3", from_group_sheaf(locally_constant_group_sheaf(space, cyclic_group(3))), dialect});
    out.push_back({prefix + "sections-unit", sections_category(unit_groupoid(space)).category, dialect});
    const auto auts = automorphisms(*space);
    if (auts.size() > 1 && auts.size() * space->size() <= 12)
      out.push_back({prefix + "sections-aut", sections_category(action_groupoid(space, auts, cyclic_group(1))).category,
                     dialect});
  }
  for (const auto& g : random_etale_groupoids(12, seed, 3, 8))
    out.push_back({"sections-" + g.name, sections_category(g.groupoid).category, dialect_for(*g.groupoid.base)});
  return out;
}

std::vector<CorpusPseudogroup> pre_pseudogroup_corpus(std::uint64_t seed, std::size_t max_points) {
  std::vector<CorpusPseudogroup> out;
  for (std::size_t n = 1; n <= max_points; ++n) {
    const auto space = share(FiniteSpace::discrete(n));
    const std::string prefix = "discrete" + std::to_string(n) + ":";
    const auto homeo = build_homeo_l(space);
    out.push_back({prefix + "homeo", homeo, Dialect::T1});
    out.push_back({prefix + "groups-Z2", from_group_sheaf(locally_constant_group_sheaf(space, cyclic_group(2))), Dialect::T1});
    if (n >= 2)
      out.push_back({prefix + "constant-Z2", from_group_sheaf(constant_group_presheaf(space, cyclic_group(2))), Dialect::T1});
    if (n <= 2) {
      out.push_back({prefix + "constant-Z3", from_group_sheaf(constant_group_presheaf(space, cyclic_group(3))), Dialect::T1});
      const auto truncated = truncations(homeo);
      for (std::size_t k = 0; k < truncated.size(); ++k)
        out.push_back({prefix + "homeo-truncated" + std::to_string(k), truncated[k], Dialect::T1});
    }
  }
  for (const auto& g : exhaustive_etale_groupoids(2, 4, seed)) {
    const auto sections = sections_category(g.groupoid).category;
    out.push_back({"sections-" + g.name, sections, Dialect::T1});
    const auto truncated = truncations(sections);
    if (!truncated.empty()) out.push_back({"sections-truncated-" + g.name, truncated.front(), Dialect::T1});
  }
  return out;
}

std::vector<Mutant> mutation_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Mutant> out;

  auto mutate_compose = [&](const PrePseudogroup& c, OpenId u, OpenId v, OpenId w) {
    auto d = c.data();
    const std::size_t n = c.open_count();
    auto& table = d.compose[(u * n + v) * n + w];
    const std::size_t entry = uniform(rng, 0, table.size() - 1);
    table[entry] = static_cast<HomId>((table[entry] + uniform(rng, 1, c.hom_size(u, w) - 1)) % c.hom_size(u, w));
    return PrePseudogroup(std::move(d));
  };
  auto pseudogroup_mutant = [&](std::string name, std::string kind, PrePseudogroup c) {
    Mutant m;
    m.name = std::move(name);
    m.kind = std::move(kind);
    m.target = Mutant::Target::Pseudogroup;
    m.pseudogroup = std::move(c);
    out.push_back(std::move(m));
  };
  auto presheaf_mutant = [&](std::string name, std::string kind, Presheaf p) {
    Mutant m;
    m.name = std::move(name);
    m.kind = std::move(kind);
    m.target = Mutant::Target::Presheaf;
    m.presheaf = std::move(p);
    out.push_back(std::move(m));
  };
  auto groupoid_mutant = [&](std::string name, std::string kind, TopGroupoid g) {
    Mutant m;
    m.name = std::move(name);
    m.kind = std::move(kind);
    m.target = Mutant::Target::Groupoid;
    m.groupoid = std::move(g);
    out.push_back(std::move(m));
  };

  const auto d1 = share(FiniteSpace::discrete(1));
  const auto d2 = share(FiniteSpace::discrete(2));
  const auto d3 = share(FiniteSpace::discrete(3));
  const OpenId full2 = d2->full_id();

  // 1. composition of two local homeomorphisms
  const auto homeo = build_homeo_l(d2);
  pseudogroup_mutant("homeo-compose", "associativity", mutate_compose(homeo, full2, full2, full2));
  // 2. product in a group sheaf over one point
  {
    const auto c = from_group_sheaf(locally_constant_group_sheaf(d1, cyclic_group(2)));
    pseudogroup_mutant("group-compose", "associativity", mutate_compose(c, d1->full_id(), d1->full_id(), d1->full_id()));
  }
  // 3. groupoid composition swapped to the parallel arrow
  {
    auto g = action_groupoid(d2, {{0, 1}, {1, 0}}, cyclic_group(2));
    const std::size_t n = g.arrow_count();
    std::vector<std::size_t> defined;
    for (std::size_t k = 0; k < g.comp.size(); ++k)
      if (g.comp[k]) defined.push_back(k);
    const std::size_t k = defined[uniform(rng, 0, defined.size() - 1)];
    const std::size_t h = *g.comp[k];
    for (std::size_t a = 0; a < n; ++a)
      if (a != h && g.source[a] == g.source[h] && g.target[a] == g.target[h]) {
        g.comp[k] = a;
        break;
      }
    groupoid_mutant("groupoid-comp", "associativity", std::move(g));
  }
  // 4. restriction of a locally constant sheaf
  auto mutate_restriction = [&](const Presheaf& p, OpenId from, OpenId to) {
    auto restrictions = p.restriction_table();
    auto& row = restrictions[from * p.open_count() + to];
    const std::size_t s = uniform(rng, 0, row.size() - 1);
    row[s] = (row[s] + uniform(rng, 1, p.section_count(to) - 1)) % p.section_count(to);
    return Presheaf(p.space_ptr(), p.section_table(), std::move(restrictions));
  };
  {
    const auto p = locally_constant_group_sheaf(d2, cyclic_group(2)).presheaf;
    const OpenId to = d2->open_id(PointSet::singleton(uniform(rng, 0, 1)));
    presheaf_mutant("sheaf-restriction", "restriction", mutate_restriction(p, full2, to));
  }
  // 5. inclusion of a point into the space
  {
    auto d = homeo.data();
    const OpenId point = d2->open_id(PointSet::singleton(uniform(rng, 0, 1)));
    const std::size_t slot = point * homeo.open_count() + full2;
    d.incl[slot] = static_cast<HomId>((*d.incl[slot] + 1) % homeo.hom_size(point, full2));
    pseudogroup_mutant("homeo-inclusion", "restriction", PrePseudogroup(std::move(d)));
  }
  // 6. restriction of a three-valued constant sheaf
  {
    const auto p = locally_constant_group_sheaf(d3, cyclic_group(3)).presheaf;
    const OpenId to = d3->open_id(PointSet::singleton(uniform(rng, 0, 2)));
    presheaf_mutant("constant-restriction", "restriction", mutate_restriction(p, d3->full_id(), to));
  }
  // 7. groupoid inverse
  {
    auto g = pair_groupoid(2);
    const std::size_t a = uniform(rng, 0, g.arrow_count() - 1);
    g.inverse[a] = (g.inverse[a] + uniform(rng, 1, g.arrow_count() - 1)) % g.arrow_count();
    groupoid_mutant("groupoid-inverse", "invertibility", std::move(g));
  }
  // 8. a germ turned non-invertible inside a group
  {
    const auto c = from_group_sheaf(locally_constant_group_sheaf(d1, cyclic_group(3)));
    auto d = c.data();
    const OpenId x = d1->full_id();
    auto& table = d.compose[(x * c.open_count() + x) * c.open_count() + x];
    // Non-identity elements are 1 and 2; send a product of two of them to one of them.
    const std::size_t g = uniform(rng, 1, 2), f = uniform(rng, 1, 2);
    table[g * 3 + f] = static_cast<HomId>(g);
    pseudogroup_mutant("group-monoid", "invertibility", PrePseudogroup(std::move(d)));
  }
  // 9. a section of the full space dropped from a sheaf
  {
    const auto p = locally_constant_group_sheaf(d2, cyclic_group(2)).presheaf;
    const std::size_t drop = uniform(rng, 0, p.section_count(full2) - 1);
    auto sections = p.section_table();
    auto restrictions = p.restriction_table();
    sections[full2].erase(sections[full2].begin() + static_cast<std::ptrdiff_t>(drop));
    for (OpenId to = 0; to < p.open_count(); ++to) {
      auto& row = restrictions[full2 * p.open_count() + to];
      if (row.empty()) continue;
      row.erase(row.begin() + static_cast<std::ptrdiff_t>(drop));
      if (to == full2)
        for (auto& r : row)
          if (r > drop) --r;
    }
    presheaf_mutant("sheaf-dropped", "gluing", Presheaf(p.space_ptr(), std::move(sections), std::move(restrictions)));
  }
  // 10. a gluable local homeomorphism dropped
  {
    const auto truncated = truncations(homeo);
    pseudogroup_mutant("homeo-dropped", "gluing", truncated[uniform(rng, 0, truncated.size() - 1)]);
  }
  return out;
}

std::vector<std::string> detecting_checks(const Mutant& m) {
  std::vector<std::string> hits;
  auto guarded = [&](const std::string& name, const std::function<bool()>& passes) {
    try {
      if (!passes()) hits.push_back(name);
    } catch (const Error&) {
      hits.push_back(name);
    }
  };
  switch (m.target) {
    case Mutant::Target::Pseudogroup: {
      const auto& c = m.pseudogroup;
      guarded("category", [&] { return check_category(c).ok(); });
      if (c.space().is_t1()) guarded("def21", [&] { return def21_conditions(c).ok(); });
      if (c.has_underlying()) guarded("nonT1", [&] { return is_pseudogroup_sheaf(c, Dialect::NonT1).ok(); });
      break;
    }
    case Mutant::Target::Presheaf: {
      const auto& p = m.presheaf;
      guarded("presheaf", [&] { return check_presheaf(p).ok(); });
      guarded("sheaf", [&] { return is_sheaf(p).ok; });
      break;
    }
    case Mutant::Target::Groupoid: {
      const auto& g = m.groupoid;
      guarded("groupoid", [&] { return check_groupoid(g).ok(); });
      guarded("etale", [&] { return is_etale(g).ok; });
      break;
    }
  }
  return hits;
}

}  // namespace etale
