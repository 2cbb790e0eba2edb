#ifndef CMOD_REL_EXPR_HPP_
#define CMOD_REL_EXPR_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/relation.hpp"

namespace cmod {

  enum class VarKind { Cong, Tol, Adm };

  char const* to_string(VarKind k) noexcept;
  RelKind     rel_kind(VarKind k) noexcept;

  // Repetition count of alt/pow: a literal, or a named parameter minus an
  // offset ("k", "k-1").
  struct Count {
    std::size_t value  = 0;
    std::string symbol;
    std::size_t offset = 0;

    bool symbolic() const noexcept {
      return !symbol.empty();
    }
    bool operator==(Count const&) const = default;
  };

  using Params = std::map<std::string, std::size_t, std::less<>>;

  // Resolves a count; throws std::out_of_range for an unbound symbol and
  // std::domain_error when the offset exceeds the bound value.
  std::size_t resolve(Count const& c, Params const& params);

  struct RelExpr;
  using ExprPtr = std::shared_ptr<RelExpr const>;

  struct RelExpr : std::enable_shared_from_this<RelExpr> {
    enum class Op { Var, Compose, Meet, Converse, Gen, Alt, Power };

    Op                   op;
    std::string          name;                   // Var
    VarKind              kind = VarKind::Cong;   // Var, Gen
    std::vector<ExprPtr> args;
    Count                count;                  // Alt, Power
  };

  bool equal(RelExpr const& x, RelExpr const& y);
  // Does the subtree contain a symbolic count?
  bool has_symbol(RelExpr const& e);
  bool has_closure(RelExpr const& e);

  namespace expr {
    ExprPtr var(std::string name, VarKind kind);
    // Flattens nested composites; a single argument is returned unchanged.
    ExprPtr compose(std::vector<ExprPtr> args);
    ExprPtr meet(std::vector<ExprPtr> args);
    ExprPtr conv(ExprPtr e);
    ExprPtr gen(VarKind kind, std::vector<ExprPtr> args);
    ExprPtr alt(ExprPtr r, ExprPtr s, Count m);
    ExprPtr pow(ExprPtr r, Count h);
  }  // namespace expr

  struct Identity {
    std::string                                  name;
    std::vector<std::pair<std::string, VarKind>> vars;  // declaration order
    ExprPtr                                      lhs;
    ExprPtr                                      rhs;
    // Informational; side conditions are built into the expressions.
    std::vector<std::string> side_conditions;

    std::optional<VarKind> kind_of(std::string_view var) const;
    // Symbols used by counts, sorted.
    std::vector<std::string> symbols() const;
  };

  // Compares declarations and both sides; names and notes are ignored.
  bool same_statement(Identity const& x, Identity const& y);

  Identity    parse_identity(std::string_view text);
  std::string to_string(RelExpr const& e);
  std::string to_string(Identity const& id);

  using Env = std::map<std::string, BinRel, std::less<>>;

  // Evaluates expressions over one environment.  Subexpressions without
  // symbolic counts are cached across calls, so several parameter values
  // can be tried cheaply.  Membership queries go through row images and
  // never materialize compositions.
  class Evaluator {
   public:
    // `algebra` may be null when no closure occurs and every variable
    // carries a kind hint at least as strong as its declaration.
    Evaluator(FiniteAlgebra const* algebra, std::size_t n, Env const& env);

    std::size_t size() const noexcept {
      return _n;
    }

    BinRel     eval(RelExpr const& e, Params const& params = {});
    ElementSet image(RelExpr const&    e,
                     ElementSet const& from,
                     Params const&     params = {});
    bool contains(RelExpr const& e, std::size_t a, std::size_t b,
                  Params const& params = {});

   private:
    void          pin(RelExpr const& e);
    BinRel const& leaf(RelExpr const& e, Params const& params);
    BinRel const& variable(RelExpr const& e);
    ElementSet const& row(RelExpr const& e, std::size_t a, Params const& p);

    FiniteAlgebra const* _alg;
    std::size_t          _n;
    Env const&           _env;
    std::map<std::string, bool, std::less<>>           _verified;
    // pins cached nodes so their addresses stay unique
    std::vector<std::shared_ptr<RelExpr const>>        _pinned;
    std::unordered_map<RelExpr const*, BinRel>         _rel;
    std::unordered_map<RelExpr const*,
                       std::vector<std::optional<ElementSet>>> _rows;
  };

  // One-shot evaluation.
  BinRel eval_expr(FiniteAlgebra const& a,
                   RelExpr const&       e,
                   Env const&           env,
                   Params const&        params = {});

}  // namespace cmod

#endif  // CMOD_REL_EXPR_HPP_
