#ifndef CMOD_TERM_HPP_
#define CMOD_TERM_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmod/algebra.hpp"

namespace cmod {

  // Immutable term tree; subterms are shared, so copies are cheap.
  class Term {
   public:
    static Term var(std::size_t index);
    static Term app(std::string op, std::vector<Term> children);

    bool is_var() const noexcept {
      return _node->op.empty();
    }
    std::size_t var_index() const;
    std::string const& op() const noexcept {
      return _node->op;
    }
    std::vector<Term> const& children() const noexcept {
      return _node->children;
    }

    // One more than the largest variable index (0 for ground terms).
    std::size_t num_vars() const;
    // Number of nodes in the tree (shared subterms counted each time).
    std::size_t size() const;
    std::size_t depth() const;

    bool operator==(Term const& other) const;

   private:
    struct Node {
      std::string       op;
      std::size_t       var = 0;
      std::vector<Term> children;
    };
    explicit Term(std::shared_ptr<Node const> n) : _node(std::move(n)) {}

    std::shared_ptr<Node const> _node;
  };

  // Prefix notation: variables are x0, x1, ...; applications are
  // `(op t1 .. tr)`, constants `(c)`.
  std::string to_prefix(Term const& t);

  // Replaces variable i by vars[i]; out-of-range variables throw
  // std::out_of_range.
  Term substitute(Term const& t, std::span<Term const> vars);
  Term        parse_term(std::string_view text);

  // Standard recursive evaluation.  Unknown operations and arity mismatches
  // throw std::invalid_argument; unbound variables std::out_of_range.
  Element eval_term(FiniteAlgebra const&     a,
                    Term const&              t,
                    std::span<Element const> assignment);

  // A term resolved against one algebra for repeated evaluation.
  class CompiledTerm {
   public:
    CompiledTerm(FiniteAlgebra const& a, Term const& t);

    std::size_t num_vars() const noexcept {
      return _num_vars;
    }
    Element operator()(std::span<Element const> assignment) const;

   private:
    struct Step {
      bool        is_var;
      std::size_t index;  // variable or operation
      std::size_t arity;
    };
    FiniteAlgebra const*         _a;
    std::vector<Step>            _program;
    std::size_t                  _num_vars = 0;
    mutable std::vector<Element> _stack;
  };

}  // namespace cmod

#endif  // CMOD_TERM_HPP_
