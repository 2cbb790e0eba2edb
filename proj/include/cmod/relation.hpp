#ifndef CMOD_RELATION_HPP_
#define CMOD_RELATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmod/algebra.hpp"

namespace cmod {

  enum class RelKind { Plain, Admissible, Tolerance, Congruence };

  char const* to_string(RelKind k) noexcept;

  using Pair    = std::pair<Element, Element>;
  using PairSet = std::vector<Pair>;

  // A dense subset of {0..n-1}, word-packed.
  class ElementSet {
   public:
    ElementSet() = default;
    explicit ElementSet(std::size_t n)
        : _n(n), _words((n + 63) / 64, 0) {}

    std::size_t universe() const noexcept {
      return _n;
    }
    bool contains(std::size_t a) const {
      return (_words[a >> 6] >> (a & 63)) & 1U;
    }
    void insert(std::size_t a) {
      _words[a >> 6] |= std::uint64_t(1) << (a & 63);
    }
    std::size_t count() const noexcept;
    std::vector<Element> elements() const;

    std::span<std::uint64_t> words() noexcept {
      return _words;
    }
    std::span<std::uint64_t const> words() const noexcept {
      return _words;
    }

    bool operator==(ElementSet const&) const = default;

   private:
    std::size_t                _n = 0;
    std::vector<std::uint64_t> _words;
  };

  // A reflexive binary relation on {0..n-1} stored as an n x n bit matrix with
  // word-packed rows.  Every constructor and operation yields a reflexive
  // relation.
  class BinRel {
   public:
    BinRel() = default;

    // The identity relation 0.
    explicit BinRel(std::size_t n);

    static BinRel identity(std::size_t n) {
      return BinRel(n);
    }
    static BinRel full(std::size_t n);
    // Reflexive closure of `pairs`.
    static BinRel from_pairs(std::size_t n, PairSet const& pairs);
    // The equivalence relation whose classes are the fibres of `labels`.
    static BinRel from_labels(std::span<std::uint32_t const> labels);
    // Parses rows of `0`/`1` characters; diagonal must be set.
    static BinRel from_rows(std::vector<std::string> const& rows);

    std::size_t size() const noexcept {
      return _n;
    }
    std::size_t words_per_row() const noexcept {
      return _wpr;
    }
    bool contains(std::size_t a, std::size_t b) const {
      return (_bits[a * _wpr + (b >> 6)] >> (b & 63)) & 1U;
    }
    void insert(std::size_t a, std::size_t b) {
      _bits[a * _wpr + (b >> 6)] |= std::uint64_t(1) << (b & 63);
    }
    std::span<std::uint64_t const> row(std::size_t a) const {
      return {_bits.data() + a * _wpr, _wpr};
    }
    std::span<std::uint64_t> row(std::size_t a) {
      return {_bits.data() + a * _wpr, _wpr};
    }
    std::span<std::uint64_t const> data() const noexcept {
      return _bits;
    }
    std::span<std::uint64_t> data() noexcept {
      return _bits;
    }

    std::size_t count() const noexcept;
    PairSet     pairs() const;

    bool is_symmetric() const;
    bool is_transitive() const;
    bool is_identity() const;
    bool is_full() const;
    bool subset_of(BinRel const& other) const;

    std::optional<RelKind> kind_hint() const noexcept {
      return _kind;
    }
    // Records a kind; the caller is responsible for it being true.  Use
    // `with_verified_kind` when it is not already known.
    BinRel& set_kind_hint(std::optional<RelKind> k) noexcept {
      _kind = k;
      return *this;
    }

    std::vector<std::string> to_rows() const;

    // Equality ignores kind hints.
    bool operator==(BinRel const& other) const {
      return _n == other._n && _bits == other._bits;
    }

   private:
    std::size_t                _n   = 0;
    std::size_t                _wpr = 0;
    std::vector<std::uint64_t> _bits;
    std::optional<RelKind>     _kind;
  };

  BinRel compose(BinRel const& r, BinRel const& s);
  BinRel meet(BinRel const& r, BinRel const& s);
  BinRel rel_union(BinRel const& r, BinRel const& s);
  BinRel converse(BinRel const& r);
  // r o s o r o ... with exactly m >= 1 factors.
  BinRel alt(BinRel const& r, BinRel const& s, std::size_t m);
  // r o ... o r with h >= 1 factors.
  BinRel power(BinRel const& r, std::size_t h);

  // Image of a set under r: { b : a r b for some a in set }.
  ElementSet image(BinRel const& r, ElementSet const& set);
  ElementSet singleton(std::size_t n, std::size_t a);

  // Admissible: preserved by every operation applied coordinatewise.
  // Tolerance: admissible and symmetric.  Congruence: tolerance and
  // transitive.  Plain: reflexive.
  bool is_compatible(FiniteAlgebra const& a, BinRel const& r, RelKind kind);

  // Verifies `kind` and returns r tagged with it; throws when it fails.
  BinRel with_verified_kind(FiniteAlgebra const& a, BinRel r, RelKind kind);

  // The least relation of the given kind containing the seed pairs.
  BinRel generate(FiniteAlgebra const& a, PairSet const& seed, RelKind kind);

  // Transitive closure of the union; both arguments must be congruences.
  BinRel cong_join(BinRel const& alpha, BinRel const& beta);

  // The whole congruence lattice, sorted by (pair count, rows).
  std::vector<BinRel> all_congruences(FiniteAlgebra const& a,
                                      std::size_t          cap = 12);

  // Class labels of an equivalence relation (smallest member of each class).
  std::vector<std::uint32_t> class_labels(BinRel const& equivalence);

}  // namespace cmod

#endif  // CMOD_RELATION_HPP_
