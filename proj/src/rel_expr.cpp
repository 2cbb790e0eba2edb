#include "cmod/rel_expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <stdexcept>

#include "cmod/error.hpp"

namespace cmod {

  char const* to_string(VarKind k) noexcept {
    switch (k) {
      case VarKind::Cong: return "cong";
      case VarKind::Tol: return "tol";
      case VarKind::Adm: return "adm";
    }
    return "?";
  }

  RelKind rel_kind(VarKind k) noexcept {
    switch (k) {
      case VarKind::Cong: return RelKind::Congruence;
      case VarKind::Tol: return RelKind::Tolerance;
      case VarKind::Adm: return RelKind::Admissible;
    }
    return RelKind::Plain;
  }

  std::size_t resolve(Count const& c, Params const& params) {
    if (!c.symbolic()) {
      return c.value;
    }
    auto it = params.find(c.symbol);
    if (it == params.end()) {
      throw std::out_of_range("unbound count parameter '" + c.symbol + "'");
    }
    if (it->second < c.offset) {
      throw std::domain_error("count " + c.symbol + "-"
                              + std::to_string(c.offset) + " is negative for "
                              + c.symbol + "=" + std::to_string(it->second));
    }
    return it->second - c.offset;
  }

  bool equal(RelExpr const& x, RelExpr const& y) {
    if (&x == &y) {
      return true;
    }
    if (x.op != y.op || x.name != y.name || x.count != y.count
        || x.args.size() != y.args.size()) {
      return false;
    }
    if ((x.op == RelExpr::Op::Var || x.op == RelExpr::Op::Gen)
        && x.kind != y.kind) {
      return false;
    }
    for (std::size_t i = 0; i < x.args.size(); ++i) {
      if (!equal(*x.args[i], *y.args[i])) {
        return false;
      }
    }
    return true;
  }

  bool has_symbol(RelExpr const& e) {
    if (e.count.symbolic()) {
      return true;
    }
    return std::any_of(e.args.begin(), e.args.end(),
                       [](ExprPtr const& a) { return has_symbol(*a); });
  }

  bool has_closure(RelExpr const& e) {
    if (e.op == RelExpr::Op::Gen) {
      return true;
    }
    return std::any_of(e.args.begin(), e.args.end(),
                       [](ExprPtr const& a) { return has_closure(*a); });
  }

  namespace expr {
    namespace {
      ExprPtr nary(RelExpr::Op op, std::vector<ExprPtr> args) {
        if (args.empty()) {
          throw std::invalid_argument("empty composite");
        }
        if (args.size() == 1) {
          return args[0];
        }
        auto out = std::make_shared<RelExpr>();
        out->op  = op;
        for (auto& a : args) {
          if (a->op == op) {
            out->args.insert(out->args.end(), a->args.begin(), a->args.end());
          } else {
            out->args.push_back(std::move(a));
          }
        }
        return out;
      }
    }  // namespace

    ExprPtr var(std::string name, VarKind kind) {
      auto out  = std::make_shared<RelExpr>();
      out->op   = RelExpr::Op::Var;
      out->name = std::move(name);
      out->kind = kind;
      return out;
    }
    ExprPtr compose(std::vector<ExprPtr> args) {
      return nary(RelExpr::Op::Compose, std::move(args));
    }
    ExprPtr meet(std::vector<ExprPtr> args) {
      return nary(RelExpr::Op::Meet, std::move(args));
    }
    ExprPtr conv(ExprPtr e) {
      auto out = std::make_shared<RelExpr>();
      out->op  = RelExpr::Op::Converse;
      out->args.push_back(std::move(e));
      return out;
    }
    ExprPtr gen(VarKind kind, std::vector<ExprPtr> args) {
      if (args.empty()) {
        throw std::invalid_argument("closure of nothing");
      }
      auto out  = std::make_shared<RelExpr>();
      out->op   = RelExpr::Op::Gen;
      out->kind = kind;
      out->args = std::move(args);
      return out;
    }
    ExprPtr alt(ExprPtr r, ExprPtr s, Count m) {
      auto out   = std::make_shared<RelExpr>();
      out->op    = RelExpr::Op::Alt;
      out->args  = {std::move(r), std::move(s)};
      out->count = std::move(m);
      return out;
    }
    ExprPtr pow(ExprPtr r, Count h) {
      auto out   = std::make_shared<RelExpr>();
      out->op    = RelExpr::Op::Power;
      out->args  = {std::move(r)};
      out->count = std::move(h);
      return out;
    }
  }  // namespace expr

  std::optional<VarKind> Identity::kind_of(std::string_view var) const {
    for (auto const& [name, kind] : vars) {
      if (name == var) {
        return kind;
      }
    }
    return std::nullopt;
  }

  namespace {
    void collect_symbols(RelExpr const& e, std::set<std::string>& out) {
      if (e.count.symbolic()) {
        out.insert(e.count.symbol);
      }
      for (auto const& a : e.args) {
        collect_symbols(*a, out);
      }
    }
  }  // namespace

  std::vector<std::string> Identity::symbols() const {
    std::set<std::string> out;
    collect_symbols(*lhs, out);
    collect_symbols(*rhs, out);
    return {out.begin(), out.end()};
  }

  bool same_statement(Identity const& x, Identity const& y) {
    return x.vars == y.vars && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
  }

  ////////////////////////////////////////////////////////////////////////
  // Parsing
  ////////////////////////////////////////////////////////////////////////

  namespace {
    enum class Tok { Ident, Int, LParen, RParen, Comma, Semi, Amp, Le, Minus,
                     End };

    struct Token {
      Tok         type;
      std::string text;
      std::size_t line;
      std::size_t col;
    };

    bool is_keyword(std::string_view s) {
      static constexpr std::string_view kw[]
          = {"cong", "tol", "adm", "o", "conv", "gen_adm", "gen_tol",
             "gen_cong", "alt", "pow"};
      return std::find(std::begin(kw), std::end(kw), s) != std::end(kw);
    }

    std::vector<Token> lex(std::string_view text) {
      std::vector<Token> out;
      std::size_t        line = 1, col = 1;
      std::size_t        i = 0;
      auto               advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j, ++i) {
          if (text[i] == '\n') {
            ++line;
            col = 1;
          } else {
            ++col;
          }
        }
      };
      while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
          advance(1);
          continue;
        }
        if (c == '#') {
          while (i < text.size() && text[i] != '\n') {
            advance(1);
          }
          continue;
        }
        Token t{Tok::End, {}, line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          std::size_t j = i;
          while (j < text.size()
                 && (std::isalnum(static_cast<unsigned char>(text[j]))
                     || text[j] == '_')) {
            ++j;
          }
          t.type = Tok::Ident;
          t.text = std::string(text.substr(i, j - i));
          advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
          std::size_t j = i;
          while (j < text.size()
                 && std::isdigit(static_cast<unsigned char>(text[j]))) {
            ++j;
          }
          t.type = Tok::Int;
          t.text = std::string(text.substr(i, j - i));
          advance(j - i);
        } else if (c == '<' && i + 1 < text.size() && text[i + 1] == '=') {
          t.type = Tok::Le;
          t.text = "<=";
          advance(2);
        } else {
          switch (c) {
            case '(': t.type = Tok::LParen; break;
            case ')': t.type = Tok::RParen; break;
            case ',': t.type = Tok::Comma; break;
            case ';': t.type = Tok::Semi; break;
            case '&': t.type = Tok::Amp; break;
            case '-': t.type = Tok::Minus; break;
            default:
              throw ParseError(std::string("unexpected character '") + c + "'",
                               line, col);
          }
          t.text = std::string(1, c);
          advance(1);
        }
        out.push_back(std::move(t));
      }
      out.push_back({Tok::End, "end of input", line, col});
      return out;
    }

    class Parser {
     public:
      explicit Parser(std::string_view text) : _toks(lex(text)) {}

      Identity statement() {
        Identity id;
        while (peek().type == Tok::Ident
               && (peek().text == "cong" || peek().text == "tol"
                   || peek().text == "adm")) {
          VarKind kind = peek().text == "cong"  ? VarKind::Cong
                         : peek().text == "tol" ? VarKind::Tol
                                                : VarKind::Adm;
          next();
          if (peek().type != Tok::Ident) {
            fail("expected a variable name");
          }
          while (peek().type == Tok::Ident) {
            Token const& t = peek();
            if (is_keyword(t.text)) {
              fail("'" + t.text + "' is reserved");
            }
            if (_decl.contains(t.text)) {
              fail("variable '" + t.text + "' declared twice");
            }
            _decl[t.text] = kind;
            id.vars.emplace_back(t.text, kind);
            next();
          }
          expect(Tok::Semi, "';' after declaration");
        }
        id.lhs = expression();
        expect(Tok::Le, "'<='");
        id.rhs = expression();
        expect(Tok::End, "end of input");
        return id;
      }

     private:
      Token const& peek(std::size_t ahead = 0) const {
        return _toks[std::min(_pos + ahead, _toks.size() - 1)];
      }
      void next() {
        if (_pos + 1 < _toks.size()) {
          ++_pos;
        }
      }
      [[noreturn]] void fail(std::string const& msg) const {
        throw ParseError(msg, peek().line, peek().col);
      }
      void expect(Tok t, char const* what) {
        if (peek().type != t) {
          fail(std::string("expected ") + what + ", found '" + peek().text
               + "'");
        }
        next();
      }

      ExprPtr expression() {
        std::vector<ExprPtr> parts{term()};
        while (peek().type == Tok::Ident && peek().text == "o") {
          next();
          parts.push_back(term());
        }
        return expr::compose(std::move(parts));
      }

      ExprPtr term() {
        std::vector<ExprPtr> parts{factor()};
        while (peek().type == Tok::Amp) {
          next();
          parts.push_back(factor());
        }
        return expr::meet(std::move(parts));
      }

      ExprPtr factor() {
        Token const t = peek();
        if (t.type == Tok::LParen) {
          next();
          ExprPtr e = expression();
          expect(Tok::RParen, "')'");
          return e;
        }
        if (t.type != Tok::Ident) {
          fail("expected a relation, found '" + t.text + "'");
        }
        if (peek(1).type == Tok::LParen) {
          if (t.text == "conv") {
            next();
            next();
            ExprPtr e = expression();
            expect(Tok::RParen, "')'");
            return expr::conv(std::move(e));
          }
          if (t.text.starts_with("gen_")) {
            VarKind kind;
            if (t.text == "gen_adm") {
              kind = VarKind::Adm;
            } else if (t.text == "gen_tol") {
              kind = VarKind::Tol;
            } else if (t.text == "gen_cong") {
              kind = VarKind::Cong;
            } else {
              fail("unknown closure '" + t.text + "'");
            }
            next();
            next();
            std::vector<ExprPtr> args{expression()};
            while (peek().type == Tok::Comma) {
              next();
              args.push_back(expression());
            }
            expect(Tok::RParen, "')'");
            return expr::gen(kind, std::move(args));
          }
          if (t.text == "alt") {
            next();
            next();
            ExprPtr r = expression();
            expect(Tok::Comma, "','");
            ExprPtr s = expression();
            if (peek().type != Tok::Comma) {
              fail("malformed alt count: expected ',' and a count");
            }
            next();
            Count m = count("alt");
            expect(Tok::RParen, "')'");
            return expr::alt(std::move(r), std::move(s), std::move(m));
          }
          if (t.text == "pow") {
            next();
            next();
            ExprPtr r = expression();
            if (peek().type != Tok::Comma) {
              fail("malformed pow count: expected ',' and a count");
            }
            next();
            Count h = count("pow");
            expect(Tok::RParen, "')'");
            return expr::pow(std::move(r), std::move(h));
          }
        }
        if (is_keyword(t.text)) {
          fail("unexpected '" + t.text + "'");
        }
        auto it = _decl.find(t.text);
        if (it == _decl.end()) {
          fail("undeclared variable '" + t.text + "'");
        }
        next();
        return expr::var(t.text, it->second);
      }

      Count count(char const* what) {
        Token const t = peek();
        Count       c;
        auto const  number = [&](Token const& tok) {
          std::size_t v   = 0;
          auto        res = std::from_chars(
              tok.text.data(), tok.text.data() + tok.text.size(), v);
          if (res.ec != std::errc{}) {
            fail(std::string("malformed ") + what + " count '" + tok.text
                 + "'");
          }
          return v;
        };
        if (t.type == Tok::Int) {
          c.value = number(t);
          next();
        } else if (t.type == Tok::Ident && !is_keyword(t.text)) {
          c.symbol = t.text;
          next();
          if (peek().type == Tok::Minus) {
            next();
            if (peek().type != Tok::Int) {
              fail(std::string("malformed ") + what + " count");
            }
            c.offset = number(peek());
            next();
          }
        } else {
          fail(std::string("malformed ") + what + " count '" + t.text + "'");
        }
        if (peek().type != Tok::RParen) {
          fail(std::string("malformed ") + what + " count");
        }
        return c;
      }

      std::vector<Token>                                   _toks;
      std::size_t                                          _pos = 0;
      std::map<std::string, VarKind, std::less<>>          _decl;
    };

    std::string count_string(Count const& c) {
      if (!c.symbolic()) {
        return std::to_string(c.value);
      }
      if (c.offset == 0) {
        return c.symbol;
      }
      return c.symbol + "-" + std::to_string(c.offset);
    }

    void print(RelExpr const& e, std::string& out, bool in_meet,
               bool in_compose) {
      using Op = RelExpr::Op;
      switch (e.op) {
        case Op::Var: out += e.name; return;
        case Op::Compose:
          if (in_meet || in_compose) {
            out += '(';
          }
          for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) {
              out += " o ";
            }
            print(*e.args[i], out, false, true);
          }
          if (in_meet || in_compose) {
            out += ')';
          }
          return;
        case Op::Meet:
          if (in_compose || in_meet) {
            out += '(';
          }
          for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) {
              out += " & ";
            }
            print(*e.args[i], out, true, false);
          }
          if (in_compose || in_meet) {
            out += ')';
          }
          return;
        case Op::Converse:
          out += "conv(";
          print(*e.args[0], out, false, false);
          out += ')';
          return;
        case Op::Gen:
          out += "gen_";
          out += to_string(e.kind);
          out += '(';
          for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) {
              out += ", ";
            }
            print(*e.args[i], out, false, false);
          }
          out += ')';
          return;
        case Op::Alt:
          out += "alt(";
          print(*e.args[0], out, false, false);
          out += ", ";
          print(*e.args[1], out, false, false);
          out += ", " + count_string(e.count) + ")";
          return;
        case Op::Power:
          out += "pow(";
          print(*e.args[0], out, false, false);
          out += ", " + count_string(e.count) + ")";
          return;
      }
    }
  }  // namespace

  Identity parse_identity(std::string_view text) {
    return Parser(text).statement();
  }

  std::string to_string(RelExpr const& e) {
    std::string out;
    print(e, out, false, false);
    return out;
  }

  std::string to_string(Identity const& id) {
    std::string out;
    for (std::size_t i = 0; i < id.vars.size(); ++i) {
      if (i == 0 || id.vars[i].second != id.vars[i - 1].second) {
        if (i) {
          out += "; ";
        }
        out += to_string(id.vars[i].second);
      }
      out += ' ';
      out += id.vars[i].first;
    }
    if (!id.vars.empty()) {
      out += "; ";
    }
    return out + to_string(*id.lhs) + " <= " + to_string(*id.rhs);
  }

  ////////////////////////////////////////////////////////////////////////
  // Evaluation
  ////////////////////////////////////////////////////////////////////////

  namespace {
    bool implies(std::optional<RelKind> hint, RelKind want) {
      if (!hint) {
        return want == RelKind::Plain;
      }
      return static_cast<int>(*hint) >= static_cast<int>(want);
    }

    void unite(ElementSet& x, ElementSet const& y) {
      auto xs = x.words();
      auto ys = y.words();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] |= ys[i];
      }
    }

    void intersect(ElementSet& x, ElementSet const& y) {
      auto xs = x.words();
      auto ys = y.words();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] &= ys[i];
      }
    }
  }  // namespace

  Evaluator::Evaluator(FiniteAlgebra const* algebra,
                       std::size_t          n,
                       Env const&           env)
      : _alg(algebra), _n(n), _env(env) {
    if (algebra && algebra->size() != n) {
      throw std::invalid_argument("evaluator size does not match algebra");
    }
  }

  void Evaluator::pin(RelExpr const& e) {
    if (auto p = e.weak_from_this().lock()) {
      _pinned.push_back(std::move(p));
    }
  }

  BinRel const& Evaluator::variable(RelExpr const& e) {
    auto it = _env.find(e.name);
    if (it == _env.end()) {
      throw std::invalid_argument("no value for variable '" + e.name + "'");
    }
    BinRel const& r = it->second;
    if (r.size() != _n) {
      throw std::invalid_argument("variable '" + e.name + "' has size "
                                  + std::to_string(r.size()) + ", expected "
                                  + std::to_string(_n));
    }
    auto    v    = _verified.try_emplace(e.name, false).first;
    RelKind want = rel_kind(e.kind);
    if (!v->second) {
      if (!implies(r.kind_hint(), want)) {
        if (!_alg) {
          throw std::invalid_argument("cannot verify kind of '" + e.name
                                      + "' without the algebra");
        }
        if (!is_compatible(*_alg, r, want)) {
          throw std::invalid_argument("variable '" + e.name + "' is not a "
                                      + std::string(to_string(want)));
        }
      }
      v->second = true;
    }
    return r;
  }

  BinRel Evaluator::eval(RelExpr const& e, Params const& params) {
    using Op       = RelExpr::Op;
    bool const fix = !has_symbol(e);
    if (fix) {
      if (auto it = _rel.find(&e); it != _rel.end()) {
        return it->second;
      }
    }
    BinRel out;
    switch (e.op) {
      case Op::Var: out = variable(e); break;
      case Op::Compose:
        out = eval(*e.args[0], params);
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          out = compose(out, eval(*e.args[i], params));
        }
        break;
      case Op::Meet:
        out = eval(*e.args[0], params);
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          out = meet(out, eval(*e.args[i], params));
        }
        break;
      case Op::Converse: out = converse(eval(*e.args[0], params)); break;
      case Op::Gen: {
        if (!_alg) {
          throw std::invalid_argument("closure needs the algebra");
        }
        PairSet seed;
        for (auto const& a : e.args) {
          auto p = eval(*a, params).pairs();
          seed.insert(seed.end(), p.begin(), p.end());
        }
        out = generate(*_alg, seed, rel_kind(e.kind));
        break;
      }
      case Op::Alt: {
        std::size_t m = resolve(e.count, params);
        out = m == 0 ? BinRel::identity(_n)
                     : alt(eval(*e.args[0], params), eval(*e.args[1], params),
                           m);
        break;
      }
      case Op::Power: {
        std::size_t h = resolve(e.count, params);
        out = h == 0 ? BinRel::identity(_n)
                     : power(eval(*e.args[0], params), h);
        break;
      }
    }
    if (fix) {
      pin(e);
      _rel.emplace(&e, out);
    }
    return out;
  }

  BinRel const& Evaluator::leaf(RelExpr const& e, Params const& params) {
    if (e.op == RelExpr::Op::Var) {
      return variable(e);
    }
    if (!has_symbol(e)) {
      eval(e, params);
      return _rel.at(&e);
    }
    // latest value only
    pin(e);
    auto it = _rel.insert_or_assign(&e, eval(e, params)).first;
    return it->second;
  }

  ElementSet const& Evaluator::row(RelExpr const& e, std::size_t a,
                                   Params const& params) {
    if (!_rows.contains(&e)) {
      pin(e);
    }
    auto& rows = _rows[&e];
    bool  fix  = !has_symbol(e);
    if (rows.size() != _n) {
      rows.assign(_n, std::nullopt);
    }
    if (fix && rows[a]) {
      return *rows[a];
    }
    ElementSet r(_n);
    if (e.op == RelExpr::Op::Meet) {
      r = image(*e.args[0], singleton(_n, a), params);
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        intersect(r, image(*e.args[i], singleton(_n, a), params));
      }
    } else {
      r = image(e, singleton(_n, a), params);
    }
    rows[a] = std::move(r);
    return *rows[a];
  }

  ElementSet Evaluator::image(RelExpr const&    e,
                              ElementSet const& from,
                              Params const&     params) {
    using Op = RelExpr::Op;
    switch (e.op) {
      case Op::Var:
      case Op::Converse:
      case Op::Gen: return cmod::image(leaf(e, params), from);
      case Op::Compose: {
        ElementSet s = from;
        for (auto const& a : e.args) {
          s = image(*a, s, params);
        }
        return s;
      }
      case Op::Meet: {
        ElementSet out(_n);
        for (auto a : from.elements()) {
          unite(out, row(e, a, params));
        }
        return out;
      }
      case Op::Alt: {
        std::size_t m = resolve(e.count, params);
        ElementSet  s = from;
        for (std::size_t i = 0; i < m; ++i) {
          ElementSet t = image(*e.args[i % 2], s, params);
          if (t == s) {
            ElementSet u = image(*e.args[(i + 1) % 2], t, params);
            if (u == t) {
              return t;
            }
          }
          s = std::move(t);
        }
        return s;
      }
      case Op::Power: {
        std::size_t h = resolve(e.count, params);
        ElementSet  s = from;
        for (std::size_t i = 0; i < h; ++i) {
          ElementSet t = image(*e.args[0], s, params);
          if (t == s) {
            break;
          }
          s = std::move(t);
        }
        return s;
      }
    }
    return from;
  }

  bool Evaluator::contains(RelExpr const& e, std::size_t a, std::size_t b,
                           Params const& params) {
    return image(e, singleton(_n, a), params).contains(b);
  }

  BinRel eval_expr(FiniteAlgebra const& a,
                   RelExpr const&       e,
                   Env const&           env,
                   Params const&        params) {
    Evaluator ev(&a, a.size(), env);
    return ev.eval(e, params);
  }

}  // namespace cmod
