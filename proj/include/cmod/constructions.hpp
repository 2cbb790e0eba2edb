#ifndef CMOD_CONSTRUCTIONS_HPP_
#define CMOD_CONSTRUCTIONS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/identity_engine.hpp"
#include "cmod/rel_expr.hpp"
#include "cmod/relation.hpp"
#include "cmod/term_chain.hpp"

namespace cmod {

  // Elements joined by steps; step i must lie in stepLabels[i] evaluated
  // over env.
  struct WitnessChain {
    std::vector<Element> elements;
    std::vector<ExprPtr> stepLabels;
    Env                  env;
  };

  // Empty when the chain is well formed and every step lies in its label;
  // otherwise the first problem found.
  std::string chain_defect(FiniteAlgebra const& a, WitnessChain const& w);
  inline bool chain_valid(FiniteAlgebra const& a, WitnessChain const& w) {
    return chain_defect(a, w).empty();
  }

  // a D b (a&g) c D d with D = R o conv(R), where a R b1, b R b1, c R c1 and
  // d R c1.
  struct DayInput {
    Element a = 0, b = 0, c = 0, d = 0;
    Element b1 = 0, c1 = 0;
  };

  // Bounded search for b, c, b1, c1 given the endpoints; at most
  // `max_tries` candidate (b, c) pairs are examined.
  std::optional<DayInput> find_day_input(BinRel const& alpha,
                                         BinRel const& gamma,
                                         BinRel const& R,
                                         Element       a,
                                         Element       d,
                                         std::size_t   max_tries = 1'000'000);

  // The elements d_i(a,b,c,d), steps alternating a & (R o conv(R)) and
  // a & g.  Throws std::invalid_argument when the chain is not a verified
  // Day chain or the input violates its description, std::logic_error if
  // the result fails validation.
  WitnessChain day_witness_chain(FiniteAlgebra const& a,
                                 TermChain const&     day,
                                 DayInput const&      in,
                                 BinRel const&        alpha,
                                 BinRel const&        gamma,
                                 BinRel const&        R);

  enum class GummVariant { AGA, AG, AGAI, AGI, Defective };
  char const* to_string(GummVariant v) noexcept;

  // AGA, AGAI: a R b S c.  AG, AGI: path b_0 = a, ..., b_m = c with
  // b_l T_{l+1} b_{l+1}, plus a R b S c for the first step.  AGAI, AGI
  // start from a_prime with a_prime (a & T) a.  Defective uses the path
  // when Ts is nonempty.  R, S, T and every T_l must be admissible.
  struct GummInput {
    Element              a_prime = 0;
    Element              a = 0, b = 0, c = 0;
    std::vector<Element> path;
    BinRel               alpha, R, S, T;
    std::vector<BinRel>  Ts;
  };

  // Throws std::invalid_argument for an unverified chain, a parity
  // violation (Defective needs n even) or an input that does not match its
  // description; std::logic_error if the result fails validation.
  WitnessChain gumm_witness_chain(FiniteAlgebra const& a,
                                  TermChain const&     gumm,
                                  GummVariant          variant,
                                  GummInput const&     in);

  // Some b with a R b S c.
  std::optional<Element> find_middle(BinRel const& R,
                                     BinRel const& S,
                                     Element       a,
                                     Element       c);

  // Day(2n) terms from Jonsson(n) terms, n even and positive.  Throws
  // std::invalid_argument otherwise.
  TermChain jonsson_to_day(TermChain const& j);
  // Same, verifying the input and the output in `a`.
  TermChain jonsson_to_day(FiniteAlgebra const& a, TermChain const& j);
  // Pads an odd Jonsson(n) chain to Jonsson(n+1).
  TermChain jonsson_even(TermChain const& j);

  // An alternating path for DAY(m) in F(m+1): elements are term operations
  // given by their values at every assignment of the m+1 generators, last
  // generator fastest.  Labels are 'b' for a & b and 'g' for a & g.
  struct FreePath {
    std::size_t                       m = 0;
    std::vector<std::vector<Element>> elements;
    std::string                       labels;

    // Factors of alt(a & b, a & g, k) the path witnesses, or of
    // alt(a & g, a & b, k) when reversed.
    std::size_t length(bool reversed = false) const noexcept {
      return labels.empty()
                 ? 0
                 : labels.size() + (labels[0] == (reversed ? 'b' : 'g'));
    }
  };

  // Builds the path from a Day chain by splitting the left side into two
  // halves joined by a & g (or by nothing) and recursing.  Throws
  // CapExceeded when |A|^(m+1) exceeds `max_tuples`.
  FreePath day_path(FiniteAlgebra const& a,
                    TermChain const&     day,
                    std::size_t          m,
                    std::size_t          max_tuples = 1 << 20);
  // Checks the steps against the kernels of the generic configuration.
  std::string path_defect(FiniteAlgebra const& a, FreePath const& p);

  // DAY(m) or DAY_REV(m) without the free algebra: an upper bound from
  // day_path and a lower bound by refuting k-1 in the monotone subpower.
  // Status Unchecked when the two do not meet.
  SpectrumResult certified_day(FiniteAlgebra const& a,
                               TermChain const&     day,
                               std::size_t          m,
                               bool                 reversed = false,
                               EngineOptions const& opts     = {});

}  // namespace cmod

#endif  // CMOD_CONSTRUCTIONS_HPP_
