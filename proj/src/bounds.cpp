#include "cmod/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmod {

  namespace {
    using U = std::uint64_t;

    [[noreturn]] void bad(std::string const& msg) {
      throw std::invalid_argument(msg);
    }

    U add(U a, U b) {
      U r;
      if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("bound overflows");
      }
      return r;
    }

    U sub(U a, U b) {
      if (b > a) {
        throw std::overflow_error("bound underflows");
      }
      return a - b;
    }

    U mul(U a, U b) {
      U r;
      if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("bound overflows");
      }
      return r;
    }

    U power(U b, U e) {
      U r = 1;
      for (U i = 0; i < e; ++i) {
        r = mul(r, b);
      }
      return r;
    }

    U pow2(U e) {
      if (e >= 63) {
        throw std::overflow_error("bound overflows");
      }
      return U(1) << e;
    }

    class Reader {
     public:
      Reader(BoundFormula const& f, BoundParams const& p) : _f(f), _p(p) {
        for (auto const& [k, v] : p) {
          if (std::find(f.params.begin(), f.params.end(), k) == f.params.end()) {
            bad(f.name + ": unknown parameter " + k);
          }
        }
      }

      U operator()(char const* name, U lo = 0) const {
        auto it = _p.find(name);
        if (it == _p.end()) {
          bad(_f.name + ": missing parameter " + name);
        }
        if (it->second < lo) {
          bad(_f.name + ": " + name + " must be at least " + std::to_string(lo));
        }
        return it->second;
      }

      U even(char const* name, U lo = 0) const {
        U v = (*this)(name, lo);
        if (v % 2) {
          bad(_f.name + ": " + name + " must be even");
        }
        return v;
      }

     private:
      BoundFormula const& _f;
      BoundParams const&  _p;
    };

    using Fn = BoundValue (*)(Reader const&);

    struct Row {
      BoundFormula formula;
      Fn           fn;
    };

    std::vector<Row> const& rows() {
      static std::vector<Row> const r = [] {
        std::vector<Row> v{
            {{"AGT", {"m", "n"}, "a(b o g ... lhs ... b) <= half o (ag o_rhs ab)",
              "m even, m >= 2", "factors", "k"},
             [](Reader const& p) {
               U m = p.even("m", 2), n = p("n");
               return BoundValue{m + 1, mul(m, n)};
             }},
            {{"AGTCOR", {"q", "n"},
              "a(b o g ... lhs ... b) <= a(g o b) o (ag o_rhs ab)", "q >= 1", "factors", "k"},
             [](Reader const& p) {
               U q = p("q", 1), n = p("n");
               return BoundValue{add(pow2(q), 1), mul(sub(pow2(q + 1), 2), n)};
             }},
            {{"AGTCOR2", {"r", "s", "q", "n"},
              "a(b o g ... lhs ... b) <= a(g o b) o (ag o_rhs ab)",
              "r, s, q >= 1", "factors", "k"},
             [](Reader const& p) {
               U r = p("r", 1), s = p("s", 1), q = p("q", 1), n = p("n");
               return BoundValue{add(mul(pow2(q), r), 1),
                                 add(s, mul(mul(sub(pow2(q + 1), 4), r), n))};
             }},
            {{"BBB", {"n"}, "(5,rhs)-modularity", "n >= 1"},
             [](Reader const& p) {
               U n = p("n", 1);
               return BoundValue{5, add(mul(6, n), 1)};
             }},
            {{"COMB", {"r", "n", "p", "q"}, "(lhs,rhs)-modularity",
              "r, p, q >= 1", "z", "w"},
             [](Reader const& p) {
               U r = p("r", 1), n = p("n"), pp = p("p", 1), q = p("q", 1);
               U c = sub(add(mul(pow2(q), pow2(pp + 1)), 2),
                         add(pow2(q + 2), mul(2, pp)));
               return BoundValue{sub(pow2(pp + q), 1),
                                 add(mul(2, power(r, q)), mul(c, n))};
             }},
            {{"DM", {"n"}, "lhs Jonsson terms index give rhs-modularity",
              "n even, n >= 2", "n", "k"},
             [](Reader const& p) {
               U n = p.even("n", 2);
               return BoundValue{n, mul(2, n)};
             }},
            {{"DST", {"r", "l"}, "D*(lhs) <= rhs", "r, l >= 1", "l", "k"},
             [](Reader const& p) {
               U r = p("r", 1), l = p("l", 1);
               return BoundValue{l, mul(2, power(r, l))};
             }},
            {{"ED", {"k"}, "tolerance form of rhs-modularity", "k >= 1"},
             [](Reader const& p) { return BoundValue{3, p("k", 1)}; }},
            {{"EDDD", {"k"}, "shifted tolerance form of rhs-modularity",
              "k >= 1"},
             [](Reader const& p) { return BoundValue{3, p("k", 1)}; }},
            {{"LTT", {"k"}, "lhs-modular gives at most rhs Gumm terms",
              "k >= 2", "k", "terms"},
             [](Reader const& p) {
               U k = p("k", 2);
               return BoundValue{k, add(sub(mul(k, k), k), 1)};
             }},
            {{"NTE", {"k"}, "representable tolerance form of rhs-modularity",
              "k >= 1"},
             [](Reader const& p) { return BoundValue{3, p("k", 1)}; }},
            {{"NUMD", {"n"}, "(3,rhs)-modularity", ""},
             [](Reader const& p) {
               return BoundValue{3, add(mul(2, p("n")), 2)};
             }},
            {{"NUMDD", {"n"}, "(3,rhs)-modularity reversed", "n even"},
             [](Reader const& p) {
               return BoundValue{3, add(mul(2, p.even("n")), 1)};
             }},
            {{"QKMOD2", {"h", "t", "p", "n"}, "(lhs,rhs)-modularity",
              "h, p >= 1, t even", "z", "t'"},
             [](Reader const& p) {
               U h = p("h", 1), t = p.even("t"), pp = p("p", 1), n = p("n");
               U z = sub(mul(pow2(pp), h + 1), 1);
               U w = add(t, mul(mul(sub(pow2(pp + 1), 4), h), n));
               w   = add(w, mul(sub(pow2(pp + 1), add(mul(2, pp), 2)), n));
               return BoundValue{z, w};
             }},
            {{"QKMOD_I", {"q", "n"}, "(lhs,rhs)-modularity", "q >= 1"},
             [](Reader const& p) {
               U q = p("q", 1), n = p("n");
               return BoundValue{add(pow2(q), 1),
                                 add(mul(sub(pow2(q + 1), 2), n), 2)};
             }},
            {{"QKMOD_II", {"q", "n"}, "(lhs,rhs)-modularity", "q >= 2"},
             [](Reader const& p) {
               U q = p("q", 2), n = p("n");
               return BoundValue{sub(pow2(q), 1),
                                 add(mul(sub(pow2(q + 1), 2 * q + 2), n), 2)};
             }},
            {{"SMALL_I", {"m"}, "(lhs,rhs)-modularity from 3-modularity",
              "m >= 3"},
             [](Reader const& p) {
               U m = p("m", 3);
               return BoundValue{m, m};
             }},
            {{"SMALL_II", {"q"}, "(lhs,rhs)-modularity from 4-modularity",
              "q >= 2"},
             [](Reader const& p) {
               U q = p("q", 2);
               return BoundValue{sub(pow2(q), 1), pow2(q)};
             }},
            {{"THM", {"r", "q"}, "(lhs,rhs)-modularity from (3,2r)",
              "r, q >= 1"},
             [](Reader const& p) {
               U r = p("r", 1), q = p("q", 1);
               return BoundValue{sub(pow2(q + 1), 1), mul(2, power(r, q))};
             }},
            {{"THM2", {"h", "r", "i"}, "(lhs,rhs)-modularity from (2h-1,2r)",
              "h, r >= 2"},
             [](Reader const& p) {
               U h = p("h", 2), r = p("r", 2), i = p("i");
               U e = pow2(i);
               return BoundValue{sub(mul(2, power(h, e)), 1),
                                 mul(2, power(r, e))};
             }},
        };
        std::sort(v.begin(), v.end(), [](Row const& x, Row const& y) {
          return x.formula.name < y.formula.name;
        });
        return v;
      }();
      return r;
    }

    Row const& row(std::string_view name) {
      for (auto const& r : rows()) {
        if (r.formula.name == name) {
          return r;
        }
      }
      bad("unknown bound " + std::string(name));
    }
  }  // namespace

  std::vector<BoundFormula> const& bound_table() {
    static std::vector<BoundFormula> const t = [] {
      std::vector<BoundFormula> v;
      for (auto const& r : rows()) {
        v.push_back(r.formula);
      }
      return v;
    }();
    return t;
  }

  BoundFormula const& bound_formula(std::string_view name) {
    return row(name).formula;
  }

  BoundValue bound(std::string_view name, BoundParams const& params) {
    Row const& r = row(name);
    return r.fn(Reader(r.formula, params));
  }

}  // namespace cmod
