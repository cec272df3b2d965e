#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "etale/pseudogroup.hpp"

namespace etale {

struct NamedGroup {
  std::string name;
  GroupTable table;
};

/// Closure of permutation generators; element 0 is the identity.
GroupTable permutation_group(const std::vector<std::vector<std::size_t>>& generators, std::size_t degree);
/// Same closure, also returning the permutations in table order.
GroupTable permutation_group(const std::vector<std::vector<std::size_t>>& generators, std::size_t degree,
                             std::vector<std::vector<std::size_t>>& elements);

GroupTable cyclic_group(std::size_t n);
GroupTable direct_product(const GroupTable& a, const GroupTable& b);

/// Every group of order at most 9, plus a selection of orders 10 to 12, up to isomorphism.
const std::vector<NamedGroup>& group_catalog();

}  // namespace etale
