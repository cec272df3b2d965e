#include "etale/groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace etale {
namespace {

GroupTable finish(std::vector<std::vector<std::size_t>> mul) {
  GroupTable g;
  g.mul = std::move(mul);
  const std::size_t n = g.mul.size();
  for (std::size_t e = 0; e < n; ++e) {
    bool neutral = true;
    for (std::size_t a = 0; a < n && neutral; ++a) neutral = g.mul[e][a] == a && g.mul[a][e] == a;
    if (neutral) {
      g.identity = e;
      break;
    }
  }
  g.inverse.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (g.mul[a][b] == g.identity) g.inverse[a] = b;
  return g;
}

/// Dicyclic group of order 12: a^k b^e with a^6 = 1, b^2 = a^3, b a = a^-1 b.
GroupTable dicyclic12() {
  std::vector<std::vector<std::size_t>> mul(12, std::vector<std::size_t>(12));
  for (std::size_t x = 0; x < 12; ++x)
    for (std::size_t y = 0; y < 12; ++y) {
      const std::size_t k = x % 6, e = x / 6, m = y % 6, f = y / 6;
      std::size_t power = (e ? k + 6 - m : k + m) % 6;
      std::size_t b = e + f;
      if (b == 2) {
        power = (power + 3) % 6;
        b = 0;
      }
      mul[x][y] = b * 6 + power;
    }
  return finish(std::move(mul));
}

std::vector<std::size_t> cycle(std::size_t degree, std::vector<std::size_t> points) {
  std::vector<std::size_t> p(degree);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = 0; i < points.size(); ++i) p[points[i]] = points[(i + 1) % points.size()];
  return p;
}

std::vector<std::size_t> product(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

}  // namespace

GroupTable permutation_group(const std::vector<std::vector<std::size_t>>& generators, std::size_t degree,
                             std::vector<std::vector<std::size_t>>& elements) {
  std::vector<std::size_t> id(degree);
  std::iota(id.begin(), id.end(), std::size_t{0});
  std::map<std::vector<std::size_t>, std::size_t> index{{id, 0}};
  elements = {id};
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (const auto& g : generators) {
      auto p = product(g, elements[i]);
      if (index.emplace(p, elements.size()).second) elements.push_back(std::move(p));
    }
  const std::size_t n = elements.size();
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = index.at(product(elements[a], elements[b]));
  return finish(std::move(mul));
}

GroupTable permutation_group(const std::vector<std::vector<std::size_t>>& generators, std::size_t degree) {
  std::vector<std::vector<std::size_t>> elements;
  return permutation_group(generators, degree, elements);
}

GroupTable cyclic_group(std::size_t n) {
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  return finish(std::move(mul));
}

GroupTable direct_product(const GroupTable& a, const GroupTable& b) {
  const std::size_t na = a.order(), nb = b.order();
  std::vector<std::vector<std::size_t>> mul(na * nb, std::vector<std::size_t>(na * nb));
  for (std::size_t x = 0; x < na * nb; ++x)
    for (std::size_t y = 0; y < na * nb; ++y) mul[x][y] = a.mul[x / nb][y / nb] * nb + b.mul[x % nb][y % nb];
  return finish(std::move(mul));
}

const std::vector<NamedGroup>& group_catalog() {
  static const std::vector<NamedGroup> catalog = [] {
    std::vector<NamedGroup> out;
    for (std::size_t n : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}) out.push_back({"Z" + std::to_string(n), cyclic_group(n)});
    auto z = [](std::size_t n) { return cyclic_group(n); };
    out.push_back({"Z2xZ2", direct_product(z(2), z(2))});
    out.push_back({"S3", permutation_group({cycle(3, {0, 1, 2}), cycle(3, {0, 1})}, 3)});
    out.push_back({"Z2xZ4", direct_product(z(2), z(4))});
    out.push_back({"Z2xZ2xZ2", direct_product(z(2), direct_product(z(2), z(2)))});
    out.push_back({"D4", permutation_group({cycle(4, {0, 1, 2, 3}), cycle(4, {1, 3})}, 4)});
    // Left multiplication by i and j on {1, -1, i, -i, j, -j, k, -k}.
    out.push_back({"Q8", permutation_group({{2, 3, 1, 0, 6, 7, 5, 4}, {4, 5, 7, 6, 1, 0, 2, 3}}, 8)});
    out.push_back({"Z3xZ3", direct_product(z(3), z(3))});
    out.push_back({"D5", permutation_group({cycle(5, {0, 1, 2, 3, 4}), product(cycle(5, {1, 4}), cycle(5, {2, 3}))}, 5)});
    out.push_back({"Z2xZ6", direct_product(z(2), z(6))});
    out.push_back({"A4", permutation_group({cycle(4, {0, 1, 2}), product(cycle(4, {0, 1}), cycle(4, {2, 3}))}, 4)});
    out.push_back(
        {"D6", permutation_group({cycle(6, {0, 1, 2, 3, 4, 5}), product(cycle(6, {1, 5}), cycle(6, {2, 4}))}, 6)});
    out.push_back({"Dic3", dicyclic12()});
    std::stable_sort(out.begin(), out.end(),
                     [](const NamedGroup& a, const NamedGroup& b) { return a.table.order() < b.table.order(); });
    return out;
  }();
  return catalog;
}

}  // namespace etale
