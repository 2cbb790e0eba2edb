#ifndef CMOD_CATALOG_HPP_
#define CMOD_CATALOG_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cmod/rel_expr.hpp"

namespace cmod {

  // A named family of inclusions; the scanned count is always `k`.
  struct CatalogEntry {
    std::string              name;
    std::string              summary;
    std::vector<std::string> params;
    std::vector<std::size_t> defaults;
    std::size_t              k_min = 0;
    // Only congruence variables, left side in the generic grammar.
    bool congruence_only = true;
  };

  std::vector<CatalogEntry> const& catalog();
  // Throws std::invalid_argument for an unknown name.
  CatalogEntry const& catalog_entry(std::string_view name);

  // Missing trailing parameters take their defaults; out-of-range values
  // throw std::invalid_argument.
  std::string catalog_text(std::string_view                name,
                           std::vector<std::size_t> const& params = {});
  Identity    catalog_identity(std::string_view                name,
                               std::vector<std::size_t> const& params = {});

}  // namespace cmod

#endif  // CMOD_CATALOG_HPP_
