#ifndef CMOD_ALGEBRA_HPP_
#define CMOD_ALGEBRA_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cmod {

  // Elements of a finite algebra are always 0..n-1.
  using Element = std::uint32_t;

  struct OpSymbol {
    std::string name;
    std::size_t arity;

    bool operator==(OpSymbol const&) const = default;
  };

  class Signature {
   public:
    Signature() = default;
    explicit Signature(std::vector<OpSymbol> ops);

    std::size_t size() const noexcept {
      return _ops.size();
    }
    OpSymbol const& operator[](std::size_t i) const {
      return _ops.at(i);
    }
    std::vector<OpSymbol> const& ops() const noexcept {
      return _ops;
    }
    std::optional<std::size_t> find(std::string_view name) const;

    bool operator==(Signature const&) const = default;

   private:
    std::vector<OpSymbol> _ops;
  };

  // A finite algebra given by full operation tables.  Tables are row-major in
  // lexicographic order of the argument tuple, last argument fastest.
  // Immutable after construction.
  class FiniteAlgebra {
   public:
    FiniteAlgebra(std::string                            name,
                  std::size_t                            size,
                  Signature                              signature,
                  std::vector<std::vector<Element>>      tables);

    std::string const& name() const noexcept {
      return _name;
    }
    std::size_t size() const noexcept {
      return _size;
    }
    Signature const& signature() const noexcept {
      return _sig;
    }
    std::size_t num_ops() const noexcept {
      return _sig.size();
    }
    std::span<Element const> table(std::size_t op) const {
      return _tables.at(op);
    }

    std::size_t op_index(std::string_view name) const;

    // Unchecked fast path; args.size() must equal the arity.
    Element apply(std::size_t op, std::span<Element const> args) const {
      std::size_t idx = 0;
      for (Element a : args) {
        idx = idx * _size + a;
      }
      return _tables[op][idx];
    }

    // Checked: unknown op, arity mismatch and out-of-range arguments throw.
    Element apply_op(std::string_view op, std::span<Element const> args) const;

    bool is_idempotent(std::size_t op) const;
    bool is_commutative(std::size_t op) const;

    // Canonical form: operations ordered by name.
    FiniteAlgebra canonical() const;

    bool operator==(FiniteAlgebra const&) const = default;

   private:
    std::string                       _name;
    std::size_t                       _size;
    Signature                         _sig;
    std::vector<std::vector<Element>> _tables;
  };

  FiniteAlgebra parse_algebra(std::string_view text);
  FiniteAlgebra load_algebra(std::string const& path);

  // Serializes the canonical form in `.alg` format.
  std::string serialize(FiniteAlgebra const& a);

  // n^k with overflow check against `limit`.
  std::size_t checked_pow(std::size_t n, std::size_t k, std::size_t limit);

}  // namespace cmod

#endif  // CMOD_ALGEBRA_HPP_
