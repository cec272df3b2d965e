#pragma once

#include <cstddef>

namespace etale {

/// Caps for the exponential parts of the kernel. Exceeding one is an explicit
/// error or an explicit "skipped" status, never a silent truncation.
struct Budgets {
  /// Irredundant cover enumeration is allowed on spaces with at most this many opens.
  std::size_t cover_opens = 12;
  /// Uniqueness certificates enumerate morphisms only when every hom-set has
  /// at most this many elements ...
  std::size_t enum_hom_size = 8;
  /// ... and the space has at most this many opens.
  std::size_t enum_opens = 6;
  /// Node cap for backtracking searches.
  std::size_t search_nodes = 5'000'000;
  /// Largest open lattice materialized for a space.
  std::size_t open_lattice = 4096;

  /// Defaults overridden by ETALE_COVER_BUDGET, ETALE_ENUM_HOM_BUDGET,
  /// ETALE_ENUM_OPENS_BUDGET and ETALE_SEARCH_BUDGET when set.
  static Budgets from_env();
};

}  // namespace etale
