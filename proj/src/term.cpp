#include "cmod/term.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "cmod/error.hpp"

namespace cmod {

  Term Term::var(std::size_t index) {
    return Term(std::make_shared<Node const>(Node{{}, index, {}}));
  }

  Term Term::app(std::string op, std::vector<Term> children) {
    if (op.empty()) {
      throw std::invalid_argument("operation name must not be empty");
    }
    return Term(
        std::make_shared<Node const>(Node{std::move(op), 0, std::move(children)}));
  }

  std::size_t Term::var_index() const {
    if (!is_var()) {
      throw std::logic_error("not a variable");
    }
    return _node->var;
  }

  std::size_t Term::num_vars() const {
    if (is_var()) {
      return _node->var + 1;
    }
    std::size_t n = 0;
    for (auto const& c : _node->children) {
      n = std::max(n, c.num_vars());
    }
    return n;
  }

  std::size_t Term::size() const {
    std::size_t n = 1;
    for (auto const& c : _node->children) {
      n += c.size();
    }
    return n;
  }

  std::size_t Term::depth() const {
    std::size_t d = 0;
    for (auto const& c : _node->children) {
      d = std::max(d, c.depth() + 1);
    }
    return d;
  }

  bool Term::operator==(Term const& other) const {
    if (_node == other._node) {
      return true;
    }
    return _node->op == other._node->op && _node->var == other._node->var
           && _node->children == other._node->children;
  }

  namespace {
    void print(Term const& t, std::string& out) {
      if (t.is_var()) {
        out += 'x';
        out += std::to_string(t.var_index());
        return;
      }
      out += '(';
      out += t.op();
      for (auto const& c : t.children()) {
        out += ' ';
        print(c, out);
      }
      out += ')';
    }

    class TermParser {
     public:
      explicit TermParser(std::string_view s) : _s(s) {}

      Term parse() {
        Term t = term();
        skip();
        if (_pos != _s.size()) {
          fail("trailing input");
        }
        return t;
      }

     private:
      [[noreturn]] void fail(std::string const& msg) const {
        throw ParseError(msg, 1, _pos + 1);
      }
      void skip() {
        while (_pos < _s.size() && std::isspace(static_cast<unsigned char>(_s[_pos]))) {
          ++_pos;
        }
      }
      std::string_view word() {
        std::size_t start = _pos;
        while (_pos < _s.size() && _s[_pos] != '(' && _s[_pos] != ')'
               && !std::isspace(static_cast<unsigned char>(_s[_pos]))) {
          ++_pos;
        }
        if (start == _pos) {
          fail("expected a name");
        }
        return _s.substr(start, _pos - start);
      }
      Term term() {
        skip();
        if (_pos >= _s.size()) {
          fail("unexpected end of term");
        }
        if (_s[_pos] == '(') {
          ++_pos;
          skip();
          std::string       op(word());
          std::vector<Term> kids;
          while (true) {
            skip();
            if (_pos >= _s.size()) {
              fail("missing ')'");
            }
            if (_s[_pos] == ')') {
              ++_pos;
              break;
            }
            kids.push_back(term());
          }
          return Term::app(std::move(op), std::move(kids));
        }
        std::size_t      at = _pos;
        std::string_view w  = word();
        std::size_t      v  = 0;
        if (w.size() < 2 || w[0] != 'x') {
          _pos = at;
          fail("expected variable x<i> or '('");
        }
        auto res = std::from_chars(w.data() + 1, w.data() + w.size(), v);
        if (res.ec != std::errc() || res.ptr != w.data() + w.size()) {
          _pos = at;
          fail("bad variable '" + std::string(w) + "'");
        }
        return Term::var(v);
      }

      std::string_view _s;
      std::size_t      _pos = 0;
    };
  }  // namespace

  Term substitute(Term const& t, std::span<Term const> vars) {
    if (t.is_var()) {
      if (t.var_index() >= vars.size()) {
        throw std::out_of_range("unbound variable x" + std::to_string(t.var_index()));
      }
      return vars[t.var_index()];
    }
    std::vector<Term> kids;
    kids.reserve(t.children().size());
    for (auto const& c : t.children()) {
      kids.push_back(substitute(c, vars));
    }
    return Term::app(t.op(), std::move(kids));
  }

  std::string to_prefix(Term const& t) {
    std::string out;
    print(t, out);
    return out;
  }

  Term parse_term(std::string_view text) {
    return TermParser(text).parse();
  }

  Element eval_term(FiniteAlgebra const&     a,
                    Term const&              t,
                    std::span<Element const> assignment) {
    if (t.is_var()) {
      if (t.var_index() >= assignment.size()) {
        throw std::out_of_range("unbound variable x"
                                + std::to_string(t.var_index()));
      }
      return assignment[t.var_index()];
    }
    std::size_t op = a.op_index(t.op());
    if (a.signature()[op].arity != t.children().size()) {
      throw std::invalid_argument("arity mismatch for '" + t.op() + "'");
    }
    std::vector<Element> args;
    args.reserve(t.children().size());
    for (auto const& c : t.children()) {
      args.push_back(eval_term(a, c, assignment));
    }
    return a.apply(op, args);
  }

  CompiledTerm::CompiledTerm(FiniteAlgebra const& a, Term const& t) : _a(&a) {
    // Post-order program for a stack machine.
    auto emit = [&](auto&& self, Term const& u) -> void {
      if (u.is_var()) {
        _program.push_back({true, u.var_index(), 0});
        _num_vars = std::max(_num_vars, u.var_index() + 1);
        return;
      }
      std::size_t op = a.op_index(u.op());
      if (a.signature()[op].arity != u.children().size()) {
        throw std::invalid_argument("arity mismatch for '" + u.op() + "'");
      }
      for (auto const& c : u.children()) {
        self(self, c);
      }
      _program.push_back({false, op, u.children().size()});
    };
    emit(emit, t);
  }

  Element CompiledTerm::operator()(std::span<Element const> assignment) const {
    if (assignment.size() < _num_vars) {
      throw std::out_of_range("unbound variable x"
                              + std::to_string(assignment.size()));
    }
    _stack.clear();
    for (auto const& s : _program) {
      if (s.is_var) {
        _stack.push_back(assignment[s.index]);
      } else {
        std::size_t base = _stack.size() - s.arity;
        Element     v    = _a->apply(
            s.index, std::span<Element const>(_stack.data() + base, s.arity));
        _stack.resize(base);
        _stack.push_back(v);
      }
    }
    return _stack.back();
  }

}  // namespace cmod
