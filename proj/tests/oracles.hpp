#ifndef CMOD_TESTS_ORACLES_HPP_
#define CMOD_TESTS_ORACLES_HPP_

// Brute-force reference implementations on std::set, independent of the
// bit-matrix code paths.

#include <algorithm>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "cmod/algebra.hpp"

namespace cmod::oracle {

  using Rel = std::set<std::pair<unsigned, unsigned>>;

  inline Rel diagonal(unsigned n) {
    Rel r;
    for (unsigned a = 0; a < n; ++a) {
      r.emplace(a, a);
    }
    return r;
  }

  inline Rel compose(Rel const& r, Rel const& s) {
    Rel out;
    for (auto [a, b] : r) {
      for (auto [c, d] : s) {
        if (b == c) {
          out.emplace(a, d);
        }
      }
    }
    return out;
  }

  inline Rel meet(Rel const& r, Rel const& s) {
    Rel out;
    std::set_intersection(r.begin(), r.end(), s.begin(), s.end(),
                          std::inserter(out, out.end()));
    return out;
  }

  inline Rel converse(Rel const& r) {
    Rel out;
    for (auto [a, b] : r) {
      out.emplace(b, a);
    }
    return out;
  }

  inline Rel alt(Rel const& r, Rel const& s, unsigned m) {
    Rel out = r;
    for (unsigned i = 1; i < m; ++i) {
      out = compose(out, i % 2 ? s : r);
    }
    return out;
  }

  // Every tuple of pairs in r mapped through every operation lands in r.
  inline bool preserved(FiniteAlgebra const& a, Rel const& r) {
    std::vector<std::pair<unsigned, unsigned>> pairs(r.begin(), r.end());
    for (std::size_t op = 0; op < a.num_ops(); ++op) {
      std::size_t          ar = a.signature()[op].arity;
      std::vector<Element> x(ar), y(ar);
      std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        if (i == ar) {
          return r.count({a.apply(op, x), a.apply(op, y)}) > 0;
        }
        for (auto [p, q] : pairs) {
          x[i] = p;
          y[i] = q;
          if (!rec(i + 1)) {
            return false;
          }
        }
        return true;
      };
      if (!rec(0)) {
        return false;
      }
    }
    return true;
  }

  inline bool is_equivalence(Rel const& r, unsigned n) {
    for (unsigned a = 0; a < n; ++a) {
      if (!r.count({a, a})) {
        return false;
      }
    }
    return converse(r) == r && compose(r, r) == r;
  }

  // All congruences, by enumerating set partitions (restricted growth
  // strings) and testing compatibility.
  inline std::vector<Rel> congruences(FiniteAlgebra const& a) {
    unsigned const        n = static_cast<unsigned>(a.size());
    std::vector<Rel>      out;
    std::vector<unsigned> g(n, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned mx) {
      if (i == n) {
        Rel r;
        for (unsigned x = 0; x < n; ++x) {
          for (unsigned y = 0; y < n; ++y) {
            if (g[x] == g[y]) {
              r.emplace(x, y);
            }
          }
        }
        if (preserved(a, r)) {
          out.push_back(r);
        }
        return;
      }
      for (unsigned v = 0; v <= mx + 1 && (i > 0 || v == 0); ++v) {
        g[i] = v;
        rec(i + 1, std::max(mx, v));
      }
    };
    if (n > 0) {
      g[0] = 0;
      rec(1, 0);
    }
    return out;
  }

  // Least compatible relation containing seed and the diagonal (and converse,
  // transitive closure when asked), by naive fixpoint iteration.
  inline Rel closure(FiniteAlgebra const& a,
                     Rel                  seed,
                     bool                 symmetric,
                     bool                 transitive) {
    unsigned const n = static_cast<unsigned>(a.size());
    Rel            r = diagonal(n);
    r.insert(seed.begin(), seed.end());
    while (true) {
      Rel next = r;
      if (symmetric) {
        auto c = converse(r);
        next.insert(c.begin(), c.end());
      }
      if (transitive) {
        auto c = compose(r, r);
        next.insert(c.begin(), c.end());
      }
      std::vector<std::pair<unsigned, unsigned>> pairs(r.begin(), r.end());
      for (std::size_t op = 0; op < a.num_ops(); ++op) {
        std::size_t          ar = a.signature()[op].arity;
        std::vector<Element> x(ar), y(ar);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == ar) {
            next.emplace(a.apply(op, x), a.apply(op, y));
            return;
          }
          for (auto [p, q] : pairs) {
            x[i] = p;
            y[i] = q;
            rec(i + 1);
          }
        };
        rec(0);
      }
      if (next == r) {
        return r;
      }
      r = std::move(next);
    }
  }

  // Free algebra as the set of full value vectors reachable from the
  // projections, by naive fixpoint over all argument tuples.
  inline std::set<std::vector<Element>> free_vectors(FiniteAlgebra const& a,
                                                     unsigned             g) {
    std::size_t const n = a.size();
    std::size_t       N = 1;
    for (unsigned i = 0; i < g; ++i) {
      N *= n;
    }
    std::set<std::vector<Element>> out;
    for (unsigned i = 0; i < g; ++i) {
      std::vector<Element> v(N);
      for (std::size_t t = 0; t < N; ++t) {
        std::size_t x = t;
        for (unsigned k = g - 1; k > i; --k) {
          x /= n;
        }
        v[t] = static_cast<Element>(x % n);
      }
      out.insert(v);
    }
    while (true) {
      std::vector<std::vector<Element>> cur(out.begin(), out.end());
      std::size_t                       before = out.size();
      for (std::size_t op = 0; op < a.num_ops(); ++op) {
        std::size_t                        ar = a.signature()[op].arity;
        std::vector<std::size_t>           pick(ar);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == ar) {
            std::vector<Element> v(N), args(ar);
            for (std::size_t t = 0; t < N; ++t) {
              for (std::size_t k = 0; k < ar; ++k) {
                args[k] = cur[pick[k]][t];
              }
              v[t] = a.apply(op, args);
            }
            out.insert(v);
            return;
          }
          for (std::size_t j = 0; j < cur.size(); ++j) {
            pick[i] = j;
            rec(i + 1);
          }
        };
        rec(0);
      }
      if (out.size() == before) {
        return out;
      }
    }
  }

}  // namespace cmod::oracle

#endif  // CMOD_TESTS_ORACLES_HPP_
