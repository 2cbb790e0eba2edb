#ifndef CMOD_BOUNDS_HPP_
#define CMOD_BOUNDS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cmod {

  using BoundParams = std::map<std::string, std::uint64_t, std::less<>>;

  struct BoundFormula {
    std::string              name;
    std::vector<std::string> params;
    // What lhs and rhs count, e.g. "(m,k)-modularity".
    std::string meaning;
    std::string constraints;
    // Labels for lhs and rhs in printed output.
    std::string lhs_name = "m";
    std::string rhs_name = "k";
  };

  // lhs: the left count (m of (m,k), a level, or a number of Day terms);
  // rhs: the bound it yields.
  struct BoundValue {
    std::uint64_t lhs = 0;
    std::uint64_t rhs = 0;
  };

  // Sorted by name.
  std::vector<BoundFormula> const& bound_table();
  // Throws std::invalid_argument for an unknown name.
  BoundFormula const& bound_formula(std::string_view name);

  // Throws std::invalid_argument when a parameter is missing, unknown or
  // violates the formula's constraints, std::overflow_error when the value
  // does not fit in 64 bits.
  BoundValue bound(std::string_view name, BoundParams const& params);

}  // namespace cmod

#endif  // CMOD_BOUNDS_HPP_
