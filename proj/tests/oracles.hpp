#pragma once

// Brute-force reference computations. They work on raw subsets and minimal opens
// only, never through the kernel's lattice, cover or germ machinery.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "etale/finite_space.hpp"
#include "etale/presheaf.hpp"

namespace oracle {

using Mask = std::uint32_t;

inline bool has(Mask m, std::size_t i) { return (m >> i) & 1U; }

inline Mask mask_of(const etale::PointSet& s, std::size_t n) {
  Mask m = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (s.contains(i)) m |= Mask{1} << i;
  return m;
}

/// Alexandrov opens are exactly the up-sets: S is open iff U_x lies in S for every x in S.
inline bool is_open(const etale::FiniteSpace& space, Mask s) {
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x)
    if (has(s, x) && (mask_of(space.minimal_open(x), n) & ~s) != 0) return false;
  return true;
}

inline std::vector<Mask> opens(const etale::FiniteSpace& space) {
  std::vector<Mask> out;
  for (Mask s = 0; s < (Mask{1} << space.size()); ++s)
    if (is_open(space, s)) out.push_back(s);
  return out;
}

/// A map is given by values on the points of dom (other entries ignored).
inline Mask image(const std::vector<std::size_t>& f, Mask s, std::size_t n) {
  Mask out = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (has(s, i)) out |= Mask{1} << f[i];
  return out;
}

inline Mask preimage(const std::vector<std::size_t>& f, Mask dom, Mask s, std::size_t n) {
  Mask out = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (has(dom, i) && has(s, f[i])) out |= Mask{1} << i;
  return out;
}

inline bool continuous(const etale::FiniteSpace& space, const std::vector<std::size_t>& f, Mask dom) {
  const std::size_t n = space.size();
  for (Mask o : opens(space))
    if (!is_open(space, preimage(f, dom, o, n))) return false;
  return true;
}

/// Every point has an open neighbourhood W in dom with f|W injective, f(W) open and
/// f|W open onto f(W): the definition of a local homeomorphism, checked literally.
inline bool local_homeo(const etale::FiniteSpace& space, const std::vector<std::size_t>& f, Mask dom) {
  const std::size_t n = space.size();
  if (!continuous(space, f, dom)) return false;
  const auto all_opens = opens(space);
  for (std::size_t x = 0; x < n; ++x) {
    if (!has(dom, x)) continue;
    bool found = false;
    for (Mask w : all_opens) {
      if (!has(w, x) || (w & ~dom) != 0) continue;
      const Mask fw = image(f, w, n);
      if (std::popcount(fw) != std::popcount(w) || !is_open(space, fw)) continue;
      bool open_map = true;
      for (Mask o : all_opens)
        if ((o & ~w) == 0 && !is_open(space, image(f, o, n))) open_map = false;
      if (open_map) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Number of local homeomorphisms dom -> cod, by enumerating every function.
inline std::size_t count_local_homeos(const etale::FiniteSpace& space, Mask dom, Mask cod) {
  const std::size_t n = space.size();
  std::vector<std::size_t> domain_points, cod_points;
  for (std::size_t i = 0; i < n; ++i) {
    if (has(dom, i)) domain_points.push_back(i);
    if (has(cod, i)) cod_points.push_back(i);
  }
  if (domain_points.empty()) return 1;
  if (cod_points.empty()) return 0;
  std::size_t count = 0;
  std::vector<std::size_t> digits(domain_points.size(), 0);
  std::vector<std::size_t> f(n, 0);
  while (true) {
    for (std::size_t k = 0; k < domain_points.size(); ++k) f[domain_points[k]] = cod_points[digits[k]];
    if (local_homeo(space, f, dom)) ++count;
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == cod_points.size()) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  return count;
}

/// Colimit of sections over the neighbourhoods of x as an explicit quotient of
/// pairs (U, s), identified when they agree on some open W containing x.
struct Quotient {
  std::size_t classes = 0;
  /// True when sending (U, s) to its restriction on U_x is constant on classes
  /// and bijective onto sections(U_x).
  bool matches_minimal_open = false;
};

inline Quotient colimit_quotient(const etale::Presheaf& p, std::size_t x) {
  const auto& space = p.space();
  const std::size_t n = space.size();
  struct Pair {
    etale::OpenId open;
    etale::SectionId section;
  };
  std::vector<Pair> pairs;
  for (etale::OpenId u = 0; u < space.open_count(); ++u)
    if (space.open(u).contains(x))
      for (etale::SectionId s = 0; s < p.section_count(u); ++s) pairs.push_back({u, s});

  std::vector<std::size_t> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const Mask ua = mask_of(space.open(pairs[a].open), n), ub = mask_of(space.open(pairs[b].open), n);
      for (etale::OpenId w = 0; w < space.open_count(); ++w) {
        const Mask mw = mask_of(space.open(w), n);
        if (!has(mw, x) || (mw & ~(ua & ub)) != 0) continue;
        if (p.restrict(pairs[a].open, w, pairs[a].section) == p.restrict(pairs[b].open, w, pairs[b].section)) {
          parent[find(a)] = find(b);
          break;
        }
      }
    }

  Quotient out;
  const etale::OpenId ux = space.open_id(space.minimal_open(x));
  std::vector<std::optional<etale::SectionId>> class_value(pairs.size());
  std::vector<bool> hit(p.section_count(ux), false);
  bool consistent = true;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    const std::size_t r = find(a);
    if (r == a) ++out.classes;
    const auto v = p.restrict(pairs[a].open, ux, pairs[a].section);
    if (class_value[r] && *class_value[r] != v) consistent = false;
    class_value[r] = v;
    hit[v] = true;
  }
  const bool onto = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  out.matches_minimal_open = consistent && onto && out.classes == p.section_count(ux);
  return out;
}

/// The equalizer condition over every cover of every open by proper open subsets,
/// counting matching families by backtracking. nullopt when the cover count exceeds the cap.
inline std::optional<bool> sheaf_over_all_covers(const etale::Presheaf& p, std::size_t cover_cap = 1u << 16) {
  const auto& space = p.space();
  const std::size_t n = space.size();
  std::vector<Mask> masks(space.open_count());
  for (etale::OpenId u = 0; u < space.open_count(); ++u) masks[u] = mask_of(space.open(u), n);
  auto id_of = [&](Mask m) { return static_cast<etale::OpenId>(std::find(masks.begin(), masks.end(), m) - masks.begin()); };

  std::size_t covers = 0;
  for (etale::OpenId u = 0; u < masks.size(); ++u) {
    std::vector<etale::OpenId> inside;
    for (etale::OpenId v = 0; v < masks.size(); ++v)
      if (masks[v] != 0 && masks[v] != masks[u] && (masks[v] & ~masks[u]) == 0) inside.push_back(v);
    if (inside.size() > 20) return std::nullopt;
    for (std::uint32_t pick = 0; pick < (1u << inside.size()); ++pick) {
      std::vector<etale::OpenId> cover;
      Mask un = 0;
      for (std::size_t k = 0; k < inside.size(); ++k)
        if ((pick >> k) & 1U) {
          cover.push_back(inside[k]);
          un |= masks[inside[k]];
        }
      if (un != masks[u]) continue;
      if (++covers > cover_cap) return std::nullopt;

      std::size_t families = 0;
      std::vector<etale::SectionId> chosen(cover.size());
      auto agrees = [&](std::size_t i) {
        for (std::size_t j = 0; j < i; ++j) {
          const auto w = id_of(masks[cover[i]] & masks[cover[j]]);
          if (p.restrict(cover[i], w, chosen[i]) != p.restrict(cover[j], w, chosen[j])) return false;
        }
        return true;
      };
      auto count = [&](auto&& self, std::size_t i) -> void {
        if (i == cover.size()) {
          ++families;
          return;
        }
        for (etale::SectionId s = 0; s < p.section_count(cover[i]); ++s) {
          chosen[i] = s;
          if (agrees(i)) self(self, i + 1);
        }
      };
      count(count, 0);

      // Sections of U must map bijectively onto the matching families.
      std::vector<std::vector<etale::SectionId>> images;
      for (etale::SectionId s = 0; s < p.section_count(u); ++s) {
        std::vector<etale::SectionId> img;
        for (auto v : cover) img.push_back(p.restrict(u, v, s));
        images.push_back(std::move(img));
      }
      std::sort(images.begin(), images.end());
      if (std::adjacent_find(images.begin(), images.end()) != images.end()) return false;
      if (images.size() != families) return false;
    }
  }
  return true;
}

}  // namespace oracle
