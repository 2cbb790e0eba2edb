#include "cmod/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cmod/error.hpp"

namespace cmod {

  Signature::Signature(std::vector<OpSymbol> ops) : _ops(std::move(ops)) {
    for (std::size_t i = 0; i < _ops.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (_ops[i].name == _ops[j].name) {
          throw std::invalid_argument("duplicate operation name '"
                                      + _ops[i].name + "'");
        }
      }
    }
  }

  std::optional<std::size_t> Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < _ops.size(); ++i) {
      if (_ops[i].name == name) {
        return i;
      }
    }
    return std::nullopt;
  }

  std::size_t checked_pow(std::size_t n, std::size_t k, std::size_t limit) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (n != 0 && r > limit / n) {
        throw CapExceeded(std::to_string(n) + "^" + std::to_string(k)
                          + " exceeds " + std::to_string(limit));
      }
      r *= n;
    }
    return r;
  }

  FiniteAlgebra::FiniteAlgebra(std::string                       name,
                               std::size_t                       size,
                               Signature                         signature,
                               std::vector<std::vector<Element>> tables)
      : _name(std::move(name)),
        _size(size),
        _sig(std::move(signature)),
        _tables(std::move(tables)) {
    if (_size == 0) {
      throw std::invalid_argument("algebra size must be positive");
    }
    if (_tables.size() != _sig.size()) {
      throw std::invalid_argument("one table per operation required");
    }
    for (std::size_t op = 0; op < _sig.size(); ++op) {
      std::size_t expected
          = checked_pow(_size, _sig[op].arity, std::size_t(1) << 32);
      if (_tables[op].size() != expected) {
        throw std::invalid_argument("table of '" + _sig[op].name
                                    + "' has wrong length");
      }
      for (Element e : _tables[op]) {
        if (e >= _size) {
          throw std::invalid_argument("table of '" + _sig[op].name
                                      + "' has entry out of range");
        }
      }
    }
  }

  std::size_t FiniteAlgebra::op_index(std::string_view name) const {
    auto i = _sig.find(name);
    if (!i) {
      throw std::invalid_argument("unknown operation '" + std::string(name)
                                  + "'");
    }
    return *i;
  }

  Element FiniteAlgebra::apply_op(std::string_view         op,
                                  std::span<Element const> args) const {
    std::size_t i = op_index(op);
    if (args.size() != _sig[i].arity) {
      throw std::invalid_argument("operation '" + std::string(op)
                                  + "' has arity "
                                  + std::to_string(_sig[i].arity));
    }
    for (Element a : args) {
      if (a >= _size) {
        throw std::out_of_range("argument out of range");
      }
    }
    return apply(i, args);
  }

  bool FiniteAlgebra::is_idempotent(std::size_t op) const {
    std::size_t r = _sig[op].arity;
    if (r == 0) {
      return false;
    }
    std::vector<Element> args(r);
    for (Element x = 0; x < _size; ++x) {
      std::fill(args.begin(), args.end(), x);
      if (apply(op, args) != x) {
        return false;
      }
    }
    return true;
  }

  bool FiniteAlgebra::is_commutative(std::size_t op) const {
    if (_sig[op].arity != 2) {
      return false;
    }
    auto const& t = _tables[op];
    for (std::size_t x = 0; x < _size; ++x) {
      for (std::size_t y = 0; y < x; ++y) {
        if (t[x * _size + y] != t[y * _size + x]) {
          return false;
        }
      }
    }
    return true;
  }

  FiniteAlgebra FiniteAlgebra::canonical() const {
    std::vector<std::size_t> order(_sig.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [this](auto i, auto j) {
      return _sig[i].name < _sig[j].name;
    });
    std::vector<OpSymbol>             ops;
    std::vector<std::vector<Element>> tables;
    for (auto i : order) {
      ops.push_back(_sig[i]);
      tables.push_back(_tables[i]);
    }
    return FiniteAlgebra(_name, _size, Signature(std::move(ops)),
                         std::move(tables));
  }

  namespace {

    struct Token {
      std::string_view text;
      std::size_t      line;
    };

    // Splits into whitespace-separated tokens, dropping `#` comment lines.
    std::vector<Token> tokenize(std::string_view text) {
      std::vector<Token> out;
      std::size_t        line = 1;
      std::size_t        pos  = 0;
      while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
          end = text.size();
        }
        std::string_view l     = text.substr(pos, end - pos);
        std::size_t      first = l.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && l[first] != '#') {
          std::size_t i = 0;
          while (i < l.size()) {
            while (i < l.size() && (l[i] == ' ' || l[i] == '\t' || l[i] == '\r')) {
              ++i;
            }
            std::size_t j = i;
            while (j < l.size() && l[j] != ' ' && l[j] != '\t' && l[j] != '\r') {
              ++j;
            }
            if (j > i) {
              out.push_back({l.substr(i, j - i), line});
            }
            i = j;
          }
        }
        pos = end + 1;
        ++line;
      }
      return out;
    }

    std::size_t to_number(Token const& t, char const* what) {
      std::size_t v   = 0;
      auto        res = std::from_chars(t.text.data(),
                                 t.text.data() + t.text.size(), v);
      if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
        throw ParseError(std::string("expected ") + what + ", got '"
                             + std::string(t.text) + "'",
                         t.line);
      }
      return v;
    }

  }  // namespace

  FiniteAlgebra parse_algebra(std::string_view text) {
    auto        toks = tokenize(text);
    std::size_t i    = 0;
    auto        next = [&](char const* what) -> Token const& {
      if (i >= toks.size()) {
        std::size_t line = toks.empty() ? 1 : toks.back().line;
        throw ParseError(std::string("unexpected end of input, expected ")
                             + what,
                         line);
      }
      return toks[i++];
    };
    auto expect = [&](std::string_view kw) {
      Token const& t = next(std::string(kw).c_str());
      if (t.text != kw) {
        throw ParseError("malformed header: expected '" + std::string(kw)
                             + "', got '" + std::string(t.text) + "'",
                         t.line);
      }
      return t.line;
    };

    std::size_t hdr  = expect("algebra");
    Token const& nm  = next("algebra name");
    if (nm.line != hdr) {
      throw ParseError("malformed header: missing algebra name", hdr);
    }
    expect("size");
    std::size_t n = to_number(next("size"), "size");
    if (n == 0) {
      throw ParseError("malformed header: size must be positive", toks[i - 1].line);
    }
    if (n > std::numeric_limits<Element>::max()) {
      throw ParseError("size too large", toks[i - 1].line);
    }

    std::vector<OpSymbol>             ops;
    std::vector<std::vector<Element>> tables;
    while (i < toks.size()) {
      std::size_t opline = expect("op");
      std::string name(next("operation name").text);
      for (auto const& o : ops) {
        if (o.name == name) {
          throw ParseError("duplicate operation '" + name + "'", opline);
        }
      }
      std::size_t arity = to_number(next("arity"), "arity");
      std::size_t len;
      try {
        len = checked_pow(n, arity, std::size_t(1) << 28);
      } catch (CapExceeded const&) {
        throw ParseError("table of '" + name + "' too large", opline);
      }
      std::vector<Element> table;
      table.reserve(len);
      for (std::size_t k = 0; k < len; ++k) {
        if (i >= toks.size() || toks[i].text == "op") {
          std::size_t line = i < toks.size() ? toks[i].line : toks.back().line;
          throw ParseError("wrong table length for '" + name + "': expected "
                               + std::to_string(len) + " entries, got "
                               + std::to_string(k),
                           line);
        }
        Token const& t = toks[i++];
        std::size_t  v = to_number(t, "table entry");
        if (v >= n) {
          throw ParseError("entry out of range: " + std::to_string(v)
                               + " in table of '" + name + "'",
                           t.line);
        }
        table.push_back(static_cast<Element>(v));
      }
      if (i < toks.size() && toks[i].text != "op") {
        throw ParseError("wrong table length for '" + name
                             + "': extra entry '" + std::string(toks[i].text)
                             + "'",
                         toks[i].line);
      }
      ops.push_back({std::move(name), arity});
      tables.push_back(std::move(table));
    }
    return FiniteAlgebra(std::string(nm.text), n, Signature(std::move(ops)),
                         std::move(tables));
  }

  FiniteAlgebra load_algebra(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_algebra(ss.str());
  }

  std::string serialize(FiniteAlgebra const& a) {
    FiniteAlgebra      c = a.canonical();
    std::ostringstream out;
    out << "algebra " << c.name() << "\nsize " << c.size() << "\n";
    for (std::size_t op = 0; op < c.num_ops(); ++op) {
      auto const& sym = c.signature()[op];
      out << "op " << sym.name << " " << sym.arity << "\n";
      auto        t   = c.table(op);
      std::size_t row = sym.arity == 0 ? 1 : c.size();
      for (std::size_t k = 0; k < t.size(); ++k) {
        out << t[k] << ((k + 1) % row == 0 ? "\n" : " ");
      }
    }
    return out.str();
  }

}  // namespace cmod
