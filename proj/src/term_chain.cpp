#include "cmod/term_chain.hpp"

#include <array>
#include <stdexcept>

#include "cmod/relation.hpp"

namespace cmod {

  char const* to_string(Scheme s) noexcept {
    switch (s) {
      case Scheme::Day:
        return "Day";
      case Scheme::Gumm:
        return "Gumm";
      case Scheme::DefectiveGumm:
        return "DefectiveGumm";
      case Scheme::Jonsson:
        return "Jonsson";
      case Scheme::Alvin:
        return "Alvin";
    }
    return "?";
  }

  std::size_t expected_terms(Scheme s, std::size_t n) noexcept {
    return s == Scheme::Day ? n + 1 : n + 2;
  }

  std::size_t scheme_arity(Scheme s) noexcept {
    return s == Scheme::Day ? 4 : 3;
  }

  namespace {

    constexpr char const* var_names = "xyzw";

    // One side of an equation: a chain term applied to variables, or a bare
    // variable.
    struct Side {
      int                term;  // -1 for a variable
      std::array<int, 4> args;  // variable indices
      int                var;
    };

    struct Equation {
      Side lhs, rhs;
    };

    Side term_side(int t, std::array<int, 4> args) {
      return {t, args, -1};
    }
    Side var_side(int v) {
      return {-1, {}, v};
    }

    std::string side_name(Side const& s, Scheme scheme, std::size_t arity) {
      if (s.term < 0) {
        return std::string(1, var_names[s.var]);
      }
      std::string out;
      if (scheme == Scheme::Day) {
        out = "d" + std::to_string(s.term);
      } else if (scheme == Scheme::Gumm || scheme == Scheme::DefectiveGumm) {
        out = s.term == 0 ? "p" : "j" + std::to_string(s.term);
      } else {
        out = "j" + std::to_string(s.term);
      }
      out += '(';
      for (std::size_t i = 0; i < arity; ++i) {
        out += var_names[s.args[i]];
        out += i + 1 < arity ? "," : ")";
      }
      return out;
    }

    // Variables: x=0, y=1, z=2, w=3.
    std::vector<Equation> equations(Scheme s, std::size_t n) {
      std::vector<Equation> eq;
      int const             X = 0, Y = 1, Z = 2, W = 3;
      if (s == Scheme::Day) {
        int const k = static_cast<int>(n);
        for (int i = 0; i <= k; ++i) {
          eq.push_back({var_side(X), term_side(i, {X, Y, Y, X})});
        }
        eq.push_back({var_side(X), term_side(0, {X, Y, Z, W})});
        for (int i = 0; i < k; ++i) {
          if (i % 2 == 0) {
            eq.push_back({term_side(i, {X, X, W, W}), term_side(i + 1, {X, X, W, W})});
          } else {
            eq.push_back({term_side(i, {X, Y, Y, W}), term_side(i + 1, {X, Y, Y, W})});
          }
        }
        eq.push_back({term_side(k, {X, Y, Z, W}), var_side(W)});
        return eq;
      }
      int const last = static_cast<int>(n) + 1;
      if (s == Scheme::Gumm || s == Scheme::DefectiveGumm) {
        // Term 0 is p, term i is j_i.
        for (int i = 1; i <= last; ++i) {
          if (s == Scheme::DefectiveGumm && i == static_cast<int>(n)) {
            continue;
          }
          eq.push_back({var_side(X), term_side(i, {X, Y, X})});
        }
        eq.push_back({var_side(X), term_side(0, {X, Z, Z})});
        eq.push_back({term_side(0, {X, X, Z}), term_side(1, {X, X, Z})});
        for (int i = 1; i < last; ++i) {
          if (i % 2 == 1) {
            eq.push_back({term_side(i, {X, Z, Z}), term_side(i + 1, {X, Z, Z})});
          } else {
            eq.push_back({term_side(i, {X, X, Z}), term_side(i + 1, {X, X, Z})});
          }
        }
        eq.push_back({term_side(last, {X, Y, Z}), var_side(Z)});
        return eq;
      }
      bool const alvin = s == Scheme::Alvin;
      for (int i = 0; i <= last; ++i) {
        eq.push_back({var_side(X), term_side(i, {X, Y, X})});
      }
      eq.push_back({var_side(X), term_side(0, {X, Y, Z})});
      for (int i = 0; i < last; ++i) {
        if ((i % 2 == 1) != alvin) {
          eq.push_back({term_side(i, {X, Z, Z}), term_side(i + 1, {X, Z, Z})});
        } else {
          eq.push_back({term_side(i, {X, X, Z}), term_side(i + 1, {X, X, Z})});
        }
      }
      eq.push_back({term_side(last, {X, Y, Z}), var_side(Z)});
      return eq;
    }

  }  // namespace

  ChainVerdict verify_chain(FiniteAlgebra const& a, TermChain const& c) {
    std::size_t const arity = scheme_arity(c.scheme);
    if (c.scheme == Scheme::DefectiveGumm && c.n == 0) {
      throw std::invalid_argument("defective Gumm chain needs n >= 1");
    }
    if (c.terms.size() != expected_terms(c.scheme, c.n)) {
      throw std::invalid_argument(
          std::string("malformed chain: ") + to_string(c.scheme) + "("
          + std::to_string(c.n) + ") needs "
          + std::to_string(expected_terms(c.scheme, c.n)) + " terms, got "
          + std::to_string(c.terms.size()));
    }
    std::vector<CompiledTerm> compiled;
    for (auto const& t : c.terms) {
      if (t.num_vars() > arity) {
        throw std::invalid_argument("malformed chain: term " + to_prefix(t)
                                    + " uses more than "
                                    + std::to_string(arity) + " variables");
      }
      compiled.emplace_back(a, t);
    }

    ChainVerdict         verdict;
    auto                 eqs = equations(c.scheme, c.n);
    std::size_t const    n   = a.size();
    std::size_t const    total = checked_pow(n, arity, std::size_t(1) << 32);
    std::vector<Element> vals(arity), args(arity);
    auto eval = [&](Side const& s) {
      if (s.term < 0) {
        return vals[s.var];
      }
      for (std::size_t i = 0; i < arity; ++i) {
        args[i] = vals[s.args[i]];
      }
      return compiled[s.term](args);
    };
    verdict.equations = eqs.size();
    for (auto const& e : eqs) {
      for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        for (std::size_t i = arity; i-- > 0;) {
          vals[i] = static_cast<Element>(rest % n);
          rest /= n;
        }
        if (eval(e.lhs) != eval(e.rhs)) {
          verdict.failures.push_back(
              {side_name(e.lhs, c.scheme, arity) + " = "
                   + side_name(e.rhs, c.scheme, arity),
               vals});
          break;
        }
      }
    }
    return verdict;
  }

  TermChain pad_chain(TermChain const& c) {
    if (c.terms.size() != expected_terms(c.scheme, c.n)) {
      throw std::invalid_argument("malformed chain");
    }
    TermChain out = c;
    out.n += 1;
    out.terms.push_back(c.terms.back());
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Searches
  ////////////////////////////////////////////////////////////////////////////

  namespace {

    // Shortest path from the set `start` to `target` whose j-th step
    // (j = 1, 2, ...) lies in steps[(j - 1) % 2].  Returns the path (first
    // element in start, last = target) or nullopt when the reachable sets
    // stabilize or max_steps is exceeded.  Ties go to the smallest index.
    std::optional<std::vector<std::size_t>>
    layered_path(ElementSet const&            start,
                 std::size_t                  target,
                 std::array<BinRel const*, 2> steps,
                 std::size_t                  max_steps) {
      std::vector<ElementSet> layers{start};
      std::size_t             unchanged = 0;
      while (!layers.back().contains(target)) {
        if (layers.size() - 1 >= max_steps || unchanged >= 2) {
          return std::nullopt;
        }
        auto const& rel  = *steps[(layers.size() - 1) % 2];
        ElementSet  next = image(rel, layers.back());
        unchanged        = next == layers.back() ? unchanged + 1 : 0;
        layers.push_back(std::move(next));
      }
      std::size_t const        len = layers.size() - 1;
      std::vector<std::size_t> path(len + 1);
      path[len] = target;
      for (std::size_t j = len; j > 0; --j) {
        // Relations here are symmetric.
        auto const& rel = *steps[(j - 1) % 2];
        for (auto e : layers[j - 1].elements()) {
          if (rel.contains(e, path[j])) {
            path[j - 1] = e;
            break;
          }
        }
      }
      return path;
    }

    struct Config3 {
      BinRel alpha, beta, gamma;
    };

    Config3 config3(FreeAlgebra const& f) {
      if (f.generators() != 3) {
        throw std::invalid_argument("expected a free algebra on 3 generators");
      }
      std::array<std::size_t, 3> yx{0, 0, 2}, yz{0, 2, 2}, zx{0, 1, 0};
      return {f.kernel(zx), f.kernel(yx), f.kernel(yz)};
    }

  }  // namespace

  std::optional<TermChain> search_day(FreeAlgebra const& f, std::size_t k_max) {
    if (f.generators() != 4) {
      throw std::invalid_argument("expected a free algebra on 4 generators");
    }
    std::array<std::size_t, 4> am{0, 1, 1, 0}, bm{0, 0, 2, 2}, gm{0, 1, 1, 3};
    BinRel const alpha = f.kernel(am);
    BinRel const ab    = meet(alpha, f.kernel(bm));
    BinRel const ag    = meet(alpha, f.kernel(gm));
    std::size_t const a = f.generator(0), d = f.generator(3);
    auto path = layered_path(singleton(f.size(), a), d, {&ab, &ag}, k_max);
    if (!path) {
      return std::nullopt;
    }
    if (path->size() == 1) {
      if (k_max < 1) {
        return std::nullopt;
      }
      path->push_back(d);
    }
    TermChain c{Scheme::Day, path->size() - 1, {}};
    for (auto e : *path) {
      c.terms.push_back(f.term_of(e));
    }
    c.terms.front() = Term::var(0);
    c.terms.back()  = Term::var(3);
    return c;
  }

  std::optional<TermChain> search_gumm(FreeAlgebra const& f, std::size_t n_max) {
    auto const        cfg = config3(f);
    std::size_t const x = f.generator(0), z = f.generator(2);
    // First step: alpha meet (gamma o beta).
    ElementSet const mids  = image(cfg.gamma, singleton(f.size(), x));
    ElementSet       first = image(cfg.beta, mids);
    ElementSet const ax    = image(cfg.alpha, singleton(f.size(), x));
    for (std::size_t w = 0; w < first.words().size(); ++w) {
      first.words()[w] &= ax.words()[w];
    }
    BinRel const ag   = meet(cfg.alpha, cfg.gamma);
    BinRel const ab   = meet(cfg.alpha, cfg.beta);
    auto         path = layered_path(first, z, {&ag, &ab}, n_max);
    if (!path) {
      return std::nullopt;
    }
    std::size_t p = 0;
    for (auto m : mids.elements()) {
      if (cfg.beta.contains(m, path->front())) {
        p = m;
        break;
      }
    }
    TermChain c{Scheme::Gumm, path->size() - 1, {f.term_of(p)}};
    for (auto e : *path) {
      c.terms.push_back(f.term_of(e));
    }
    c.terms.back() = Term::var(2);
    return c;
  }

  std::optional<TermChain> search_jonsson(FreeAlgebra const& f,
                                          std::size_t        n_max,
                                          bool               alvin) {
    auto const        cfg = config3(f);
    std::size_t const x = f.generator(0), z = f.generator(2);
    BinRel const      ag = meet(cfg.alpha, cfg.gamma);
    BinRel const      ab = meet(cfg.alpha, cfg.beta);
    std::array<BinRel const*, 2> steps{&ab, &ag};
    if (alvin) {
      std::swap(steps[0], steps[1]);
    }
    auto path = layered_path(singleton(f.size(), x), z, steps, n_max + 1);
    if (!path) {
      return std::nullopt;
    }
    if (path->size() == 1) {
      path->push_back(z);
    }
    TermChain c{alvin ? Scheme::Alvin : Scheme::Jonsson, path->size() - 2, {}};
    for (auto e : *path) {
      c.terms.push_back(f.term_of(e));
    }
    c.terms.front() = Term::var(0);
    c.terms.back()  = Term::var(2);
    return c;
  }

  std::optional<TermChain> search_day(FiniteAlgebra const& a,
                                      std::size_t          k_max,
                                      FreeOptions const&   opts) {
    return search_day(build_free(a, 4, opts), k_max);
  }

  std::optional<TermChain> search_gumm(FiniteAlgebra const& a,
                                       std::size_t          n_max,
                                       FreeOptions const&   opts) {
    return search_gumm(build_free(a, 3, opts), n_max);
  }

  std::optional<TermChain> search_jonsson(FiniteAlgebra const& a,
                                          std::size_t          n_max,
                                          bool                 alvin,
                                          FreeOptions const&   opts) {
    return search_jonsson(build_free(a, 3, opts), n_max, alvin);
  }

}  // namespace cmod
