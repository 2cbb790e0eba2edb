#ifndef CMOD_TERM_CHAIN_HPP_
#define CMOD_TERM_CHAIN_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/free_algebra.hpp"
#include "cmod/term.hpp"

namespace cmod {

  // Day(k): quaternary d_0..d_k.
  // Gumm(n), DefectiveGumm(n): ternary p, j_1..j_{n+1}.
  // Jonsson(n), Alvin(n): ternary j_0..j_{n+1} (n+1 alternation steps).
  enum class Scheme { Day, Gumm, DefectiveGumm, Jonsson, Alvin };

  char const* to_string(Scheme s) noexcept;

  struct TermChain {
    Scheme            scheme;
    std::size_t       n;
    std::vector<Term> terms;
  };

  std::size_t expected_terms(Scheme s, std::size_t n) noexcept;
  std::size_t scheme_arity(Scheme s) noexcept;

  struct EquationFailure {
    std::string          equation;
    std::vector<Element> assignment;  // values of x, y, z(, w)
  };

  struct ChainVerdict {
    std::vector<EquationFailure> failures;
    std::size_t                  equations = 0;

    bool valid() const noexcept {
      return failures.empty();
    }
  };

  // Checks every scheme equation over all assignments in `a`.  Throws
  // std::invalid_argument for a malformed chain (wrong length, terms with
  // too many variables, unknown operations).
  ChainVerdict verify_chain(FiniteAlgebra const& a, TermChain const& c);

  // Appends a copy of the final projection: Day(k) -> Day(k+1),
  // Gumm(n) -> Gumm(n+1), Jonsson(n) -> Jonsson(n+1), and so on.
  TermChain pad_chain(TermChain const& c);

  // Minimal chains read off shortest alternating paths in F(4) (Day) or
  // F(3) (the others).  nullopt when no chain exists within the bound;
  // CapExceeded when the free algebra does not fit.
  std::optional<TermChain> search_day(FreeAlgebra const& f4, std::size_t k_max);
  std::optional<TermChain> search_gumm(FreeAlgebra const& f3, std::size_t n_max);
  std::optional<TermChain> search_jonsson(FreeAlgebra const& f3,
                                          std::size_t        n_max,
                                          bool               alvin);

  std::optional<TermChain> search_day(FiniteAlgebra const& a,
                                      std::size_t          k_max,
                                      FreeOptions const&   opts = {});
  std::optional<TermChain> search_gumm(FiniteAlgebra const& a,
                                       std::size_t          n_max,
                                       FreeOptions const&   opts = {});
  std::optional<TermChain> search_jonsson(FiniteAlgebra const& a,
                                          std::size_t          n_max,
                                          bool                 alvin,
                                          FreeOptions const&   opts = {});

}  // namespace cmod

#endif  // CMOD_TERM_CHAIN_HPP_
