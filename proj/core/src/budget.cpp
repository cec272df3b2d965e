#include "etale/budget.hpp"

#include <cstdlib>
#include <string>

namespace etale {
namespace {

void override_from(const char* name, std::size_t& slot) {
  if (const char* raw = std::getenv(name)) {
    try {
      const auto value = std::stoull(raw);
      if (value > 0) slot = static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // malformed overrides keep the default
    }
  }
}

}  // namespace

Budgets Budgets::from_env() {
  Budgets b;
  override_from("ETALE_COVER_BUDGET", b.cover_opens);
  override_from("ETALE_ENUM_HOM_BUDGET", b.enum_hom_size);
  override_from("ETALE_ENUM_OPENS_BUDGET", b.enum_opens);
  override_from("ETALE_SEARCH_BUDGET", b.search_nodes);
  return b;
}

}  // namespace etale
