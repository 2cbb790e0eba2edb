#ifndef CMOD_IDENTITY_ENGINE_HPP_
#define CMOD_IDENTITY_ENGINE_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/free_algebra.hpp"
#include "cmod/rel_expr.hpp"
#include "cmod/relation.hpp"

namespace cmod {

  struct EngineOptions {
    FreeOptions free;
    std::size_t spectrum_cap = 64;
    // Full enumeration of reflexive relations up to this algebra size;
    // larger algebras use relations generated by few seed pairs.
    std::size_t enum_size  = 4;
    std::size_t seed_pairs = 2;
    std::size_t cong_cap   = 12;
    std::size_t assignment_cap = 2'000'000;
    // Table entries allowed when a closure forces materializing F(g).
    std::size_t closure_cap = 50'000'000;
    // Largest subpower built by projection_check.
    std::size_t projection_size = 4096;
  };

  // Free algebras shared between checks, keyed by algebra and rank.
  // Failed builds are remembered and rethrown.
  class FreeCache {
   public:
    std::shared_ptr<FreeAlgebra const> get(FiniteAlgebra const& a,
                                           std::size_t          g,
                                           FreeOptions const&   opts);
    std::size_t size() const;

   private:
    mutable std::mutex                                         _mu;
    std::map<std::string, std::shared_ptr<FreeAlgebra const>> _done;
    std::map<std::string, std::string>                        _failed;
  };

  // The configuration read off a left-hand side in the generic grammar:
  // nodes are free generators, each congruence variable is generated by its
  // edges, and the question is whether (first, last) lies in the right-hand
  // side.
  struct GenericConfig {
    std::size_t nodes = 0;
    std::size_t first = 0;
    std::size_t last  = 0;
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>,
             std::less<>>
        edges;
  };

  // Throws std::invalid_argument when the identity is outside the grammar.
  GenericConfig generic_configuration(Identity const& id);
  bool          pw_checkable(Identity const& id, std::string* why = nullptr);
  std::string   describe(GenericConfig const& c);
  // Generator map collapsing the edges of `var`; the identity map when the
  // variable has no edges.
  std::vector<std::size_t> identification_map(GenericConfig const& c,
                                              std::string_view     var);

  struct Verdict {
    bool        holds         = true;
    bool        variety_level = false;
    std::size_t tried         = 0;  // variable assignments examined
    Env         counterexample;
    std::optional<Pair> pair;       // in lhs, not in rhs
    std::string evidence;
  };

  enum class CheckMode { AllCongTuples, EnumerateRelations };

  // Quantifies the declared variables over relations of this algebra.
  Verdict check_concrete(FiniteAlgebra const& a,
                         Identity const&      id,
                         CheckMode            mode,
                         Params const&        params = {},
                         EngineOptions const& opts   = {});

  // Decides the identity in the variety generated by `a`.
  Verdict pw_check(FiniteAlgebra const& a,
                   Identity const&      id,
                   Params const&        params,
                   FreeCache&           cache,
                   EngineOptions const& opts = {});
  Verdict pw_check(FiniteAlgebra const& a,
                   Identity const&      id,
                   Params const&        params = {},
                   EngineOptions const& opts   = {});

  // Assignments of g generators into 0..n-1 that are nondecreasing along
  // the generator order.
  std::vector<std::vector<Element>> monotone_assignments(std::size_t n,
                                                         std::size_t g);

  // Runs the generic configuration in the subalgebra of a^S generated by
  // the generators restricted to the assignments S (each of length
  // config.nodes).  That algebra lies in the variety, so a failure refutes
  // the identity for the variety; success proves nothing and is reported
  // with variety_level false.
  Verdict projection_check(FiniteAlgebra const&                     a,
                           Identity const&                          id,
                           Params const&                            params,
                           std::vector<std::vector<Element>> const& assignments,
                           EngineOptions const& opts = {});

  // Relations a variable of the given kind ranges over in enumeration mode.
  std::vector<BinRel> relation_family(FiniteAlgebra const& a,
                                      VarKind              kind,
                                      EngineOptions const& opts = {});

  enum class SpectrumStatus { Found, ExceedsCap, Unchecked };

  char const* to_string(SpectrumStatus s) noexcept;

  struct SpectrumResult {
    std::string                family;
    std::vector<std::size_t>   params;
    std::optional<std::size_t> value;
    SpectrumStatus             status        = SpectrumStatus::Found;
    std::size_t                cap           = 0;
    bool                       algebra_level = false;
    // Why value-1 fails, or why nothing was decided.
    std::string evidence;
  };

  // Least k in [k_min, cap] for which the identity holds, where `symbol`
  // is the scanned count.  Congruence identities in the generic grammar
  // are decided for the variety; others by enumeration on `a` alone.
  SpectrumResult identity_spectrum(FiniteAlgebra const& a,
                                   Identity const&      id,
                                   std::string_view     symbol,
                                   std::size_t          k_min,
                                   FreeCache&           cache,
                                   EngineOptions const& opts = {});

  // Catalog family by name, scanning its count k.
  SpectrumResult spectrum(FiniteAlgebra const&            a,
                          std::string_view                family,
                          std::vector<std::size_t> const& params,
                          FreeCache&                      cache,
                          EngineOptions const&            opts = {});

}  // namespace cmod

#endif  // CMOD_IDENTITY_ENGINE_HPP_
