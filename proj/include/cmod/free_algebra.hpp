#ifndef CMOD_FREE_ALGEBRA_HPP_
#define CMOD_FREE_ALGEBRA_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/relation.hpp"
#include "cmod/term.hpp"

namespace cmod {

  struct FreeOptions {
    // Total stored vector entries (elements x columns).
    std::size_t cap_entries = 10'000'000;
    // Operation applications times columns, estimated per level before it
    // runs.
    double cap_work = 2e10;
    // Drop tuple columns determined by other columns through an endomorphism
    // of the base algebra.
    bool dedup_columns = true;
    bool parallel      = true;
  };

  // F_V(g) for V generated by `base`, realized as the subalgebra of
  // base^(base^g) generated by the projections.
  class FreeAlgebra {
   public:
    static constexpr std::uint32_t no_op = UINT32_MAX;

    struct Witness {
      std::uint32_t              op;  // no_op for generators
      std::vector<std::uint32_t> args;
    };

    FiniteAlgebra const& base() const noexcept {
      return _base;
    }
    std::size_t generators() const noexcept {
      return _g;
    }
    std::size_t size() const noexcept {
      return _witness.size();
    }
    // |A|^g.
    std::size_t tuple_count() const noexcept {
      return _col_of.size();
    }
    // Stored columns per vector (tuple_count without dedup).
    std::size_t columns() const noexcept {
      return _cols;
    }
    std::size_t generator(std::size_t i) const {
      return _gens.at(i);
    }

    // Stored (possibly deduplicated) vector of an element.
    std::span<std::uint8_t const> vector(std::size_t e) const {
      return {_data.data() + e * _stride, _cols};
    }
    // Value of e at every tuple of A^g, last generator fastest.
    std::vector<Element> full_vector(std::size_t e) const;

    Witness const& witness(std::size_t e) const {
      return _witness.at(e);
    }
    Term term_of(std::size_t e) const;

    // Index of the element with the given stored vector.
    std::optional<std::size_t> find(std::span<std::uint8_t const> v) const;

    // Induced operation.
    std::size_t apply(std::size_t op, std::span<std::size_t const> args) const;

    // Image of every element under the endomorphism sending generator i to
    // generator map[i].
    std::vector<std::size_t> endomorphism(std::span<std::size_t const> map) const;
    // Its kernel; for a map collapsing classes of generators this is the
    // congruence generated by the identified generator pairs.
    BinRel kernel(std::span<std::size_t const> map) const;

    // Materializes the induced operation tables; throws CapExceeded when the
    // tables would exceed `cap` entries.
    FiniteAlgebra as_algebra(std::size_t cap = 50'000'000) const;

   private:
    friend FreeAlgebra build_free(FiniteAlgebra const&, std::size_t,
                                  FreeOptions const&);
    explicit FreeAlgebra(FiniteAlgebra base) : _base(std::move(base)) {}

    // Vectors are stored zero-padded to `_stride` bytes.
    std::optional<std::size_t> find_padded(std::uint8_t const* v) const;
    void          rehash(std::size_t slots);
    void          insert_index(std::uint32_t e);

    FiniteAlgebra _base;
    std::size_t   _g    = 0;
    std::size_t   _cols = 0;
    std::size_t   _stride = 0;

    // Column bookkeeping: every full tuple t has value
    // endo[_endo_of[t]](v[_col_of[t]]); endomorphism 0 is the identity.
    std::vector<std::uint32_t>             _col_of;
    std::vector<std::uint32_t>             _endo_of;
    std::vector<std::vector<std::uint8_t>> _endos;
    std::vector<std::uint32_t>             _kept;  // full tuple per column

    std::vector<std::uint8_t>  _data;
    std::vector<Witness>       _witness;
    std::vector<std::size_t>   _gens;
    std::vector<std::uint32_t> _slots;
  };

  // A quotient of `a` generating the same variety: the smallest quotient
  // by a meet-irreducible congruence into which every such quotient embeds.
  // Returns `a` itself when there is none or its congruence lattice is too
  // large to enumerate.
  FiniteAlgebra variety_base(FiniteAlgebra const& a);

  FiniteAlgebra quotient(FiniteAlgebra const& a, BinRel const& theta);

  // Is there an injective homomorphism from `s` into `t`?
  bool embeds(FiniteAlgebra const& s, FiniteAlgebra const& t);

  // The subalgebra of a^c generated by the given vectors of length c, with
  // materialized tables.  CapExceeded when it has more than `max_size`
  // elements or its tables would exceed `cap` entries.
  struct Subpower {
    FiniteAlgebra            algebra;
    std::vector<std::size_t> generators;
  };
  Subpower generated_subpower(FiniteAlgebra const&                     a,
                              std::vector<std::vector<Element>> const& gens,
                              std::size_t max_size = 4096,
                              std::size_t cap      = 50'000'000);

  FreeAlgebra build_free(FiniteAlgebra const& a,
                         std::size_t          g,
                         FreeOptions const&   opts = {});

}  // namespace cmod

#endif  // CMOD_FREE_ALGEBRA_HPP_
