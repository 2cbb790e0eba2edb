#include "cmod/constructions.hpp"

#include <algorithm>
#include <stdexcept>

#include "cmod/catalog.hpp"
#include "cmod/error.hpp"

namespace cmod {

  std::string chain_defect(FiniteAlgebra const& a, WitnessChain const& w) {
    if (w.elements.empty()) {
      return "empty chain";
    }
    if (w.stepLabels.size() + 1 != w.elements.size()) {
      return "labels do not match steps";
    }
    for (Element e : w.elements) {
      if (e >= a.size()) {
        return "element out of range";
      }
    }
    for (std::size_t i = 0; i < w.stepLabels.size(); ++i) {
      BinRel const r = eval_expr(a, *w.stepLabels[i], w.env);
      if (!r.contains(w.elements[i], w.elements[i + 1])) {
        return "step " + std::to_string(i) + " (" + std::to_string(w.elements[i])
               + "," + std::to_string(w.elements[i + 1]) + ") not in "
               + to_string(*w.stepLabels[i]);
      }
    }
    return {};
  }

  namespace {
    using expr::compose;
    using expr::conv;
    using expr::meet;
    using expr::var;

    void require(bool ok, std::string const& what) {
      if (!ok) {
        throw std::invalid_argument(what);
      }
    }

    void require_verified(FiniteAlgebra const& a, TermChain const& c,
                          Scheme s) {
      require(c.scheme == s, std::string("expected a ") + to_string(s)
                                 + " chain, got " + to_string(c.scheme));
      auto v = verify_chain(a, c);
      require(v.valid(), "unverified input: " + (v.failures.empty()
                                                     ? std::string()
                                                     : v.failures[0].equation));
    }

    void require_admissible(FiniteAlgebra const& a, BinRel const& r,
                            char const* name) {
      require(r.size() == a.size() && is_compatible(a, r, RelKind::Admissible),
              std::string(name) + " is not admissible");
    }

    WitnessChain checked(FiniteAlgebra const& a, WitnessChain w) {
      if (auto d = chain_defect(a, w); !d.empty()) {
        throw std::logic_error("chain invalid: " + d);
      }
      return w;
    }

    Element apply(CompiledTerm const& t, std::initializer_list<Element> args) {
      std::vector<Element> v(args);
      return t(v);
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Day witness chains
  ////////////////////////////////////////////////////////////////////////

  std::optional<DayInput> find_day_input(BinRel const& alpha,
                                         BinRel const& gamma,
                                         BinRel const& R,
                                         Element       a,
                                         Element       d,
                                         std::size_t   max_tries) {
    std::size_t const n = alpha.size();
    if (!alpha.contains(a, d)) {
      return std::nullopt;
    }
    BinRel const ag  = meet(alpha, gamma);
    BinRel const cr  = converse(R);
    BinRel const del = compose(R, cr);
    std::size_t  tries = 0;
    for (Element b = 0; b < n; ++b) {
      if (!del.contains(a, b)) {
        continue;
      }
      for (Element c = 0; c < n; ++c) {
        if (!ag.contains(b, c) || !del.contains(c, d)) {
          continue;
        }
        if (++tries > max_tries) {
          return std::nullopt;
        }
        DayInput in{a, b, c, d, 0, 0};
        bool     fb = false, fc = false;
        for (Element x = 0; x < n && !(fb && fc); ++x) {
          if (!fb && R.contains(a, x) && R.contains(b, x)) {
            in.b1 = x;
            fb    = true;
          }
          if (!fc && R.contains(c, x) && R.contains(d, x)) {
            in.c1 = x;
            fc    = true;
          }
        }
        if (fb && fc) {
          return in;
        }
      }
    }
    return std::nullopt;
  }

  WitnessChain day_witness_chain(FiniteAlgebra const& a,
                                 TermChain const&     day,
                                 DayInput const&      in,
                                 BinRel const&        alpha,
                                 BinRel const&        gamma,
                                 BinRel const&        R) {
    require_verified(a, day, Scheme::Day);
    std::size_t const n = a.size();
    require(alpha.size() == n && gamma.size() == n && R.size() == n,
            "relations of the wrong size");
    require(is_compatible(a, alpha, RelKind::Congruence)
                && is_compatible(a, gamma, RelKind::Congruence),
            "alpha and gamma must be congruences");
    require_admissible(a, R, "R");
    require(std::max({in.a, in.b, in.c, in.d, in.b1, in.c1}) < n,
            "element out of range");
    require(alpha.contains(in.a, in.d), "precondition fails: (a,d) not in a");
    require(R.contains(in.a, in.b1) && R.contains(in.b, in.b1),
            "precondition fails: no a R b1 R^ b");
    require(alpha.contains(in.b, in.c) && gamma.contains(in.b, in.c),
            "precondition fails: (b,c) not in a & g");
    require(R.contains(in.c, in.c1) && R.contains(in.d, in.c1),
            "precondition fails: no c R c1 R^ d");

    WitnessChain w;
    w.env.emplace("a", BinRel(alpha).set_kind_hint(RelKind::Congruence));
    w.env.emplace("g", BinRel(gamma).set_kind_hint(RelKind::Congruence));
    w.env.emplace("R", BinRel(R).set_kind_hint(RelKind::Admissible));
    auto const A     = var("a", VarKind::Cong);
    auto const delta = meet({A, compose({var("R", VarKind::Adm),
                                         conv(var("R", VarKind::Adm))})});
    auto const ag    = meet({A, var("g", VarKind::Cong)});
    for (std::size_t i = 0; i < day.terms.size(); ++i) {
      CompiledTerm t(a, day.terms[i]);
      w.elements.push_back(apply(t, {in.a, in.b, in.c, in.d}));
      if (i + 1 < day.terms.size()) {
        w.stepLabels.push_back(i % 2 == 0 ? delta : ag);
      }
    }
    return checked(a, std::move(w));
  }

  ////////////////////////////////////////////////////////////////////////
  // Gumm witness chains
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(GummVariant v) noexcept {
    switch (v) {
      case GummVariant::AGA: return "AGA";
      case GummVariant::AG: return "AG";
      case GummVariant::AGAI: return "AGAI";
      case GummVariant::AGI: return "AGI";
      case GummVariant::Defective: return "DEFECTIVE";
    }
    return "?";
  }

  std::optional<Element> find_middle(BinRel const& R,
                                     BinRel const& S,
                                     Element       a,
                                     Element       c) {
    for (Element b = 0; b < R.size(); ++b) {
      if (R.contains(a, b) && S.contains(b, c)) {
        return b;
      }
    }
    return std::nullopt;
  }

  WitnessChain gumm_witness_chain(FiniteAlgebra const& a,
                                  TermChain const&     gumm,
                                  GummVariant          variant,
                                  GummInput const&     in) {
    bool const defective = variant == GummVariant::Defective;
    bool const improved
        = variant == GummVariant::AGAI || variant == GummVariant::AGI;
    bool const along_path = variant == GummVariant::AG
                            || variant == GummVariant::AGI
                            || (defective && !in.Ts.empty());
    if (defective) {
      require(gumm.scheme == Scheme::Gumm || gumm.scheme == Scheme::DefectiveGumm,
              "expected a Gumm chain");
      require(gumm.n % 2 == 0 && gumm.n > 0,
              "parity violation: defective chains need n even");
      require_verified(a, gumm, gumm.scheme);
    } else {
      require_verified(a, gumm, Scheme::Gumm);
    }
    std::size_t const n = a.size();
    require(in.alpha.size() == n && is_compatible(a, in.alpha, RelKind::Congruence),
            "alpha must be a congruence");
    require_admissible(a, in.R, "R");
    require_admissible(a, in.S, "S");
    require(std::max({in.a, in.b, in.c, in.a_prime}) < n, "element out of range");
    require(in.alpha.contains(in.a, in.c), "precondition fails: (a,c) not in a");
    require(in.R.contains(in.a, in.b) && in.S.contains(in.b, in.c),
            "decomposition not found: no a R b S c");
    if (improved) {
      require_admissible(a, in.T, "T");
      require(in.T.contains(in.a_prime, in.a)
                  && in.alpha.contains(in.a_prime, in.a),
              "precondition fails: (a',a) not in a & T");
    }
    std::size_t const m = in.Ts.size();
    if (along_path) {
      require(m > 0 && in.path.size() == m + 1, "path does not match T_1..T_m");
      require(in.path.front() == in.a && in.path.back() == in.c,
              "path endpoints differ from a and c");
      for (std::size_t l = 0; l < m; ++l) {
        require_admissible(a, in.Ts[l], "T_l");
        require(in.path[l] < n && in.Ts[l].contains(in.path[l], in.path[l + 1]),
                "decomposition not found: step " + std::to_string(l)
                    + " of the path");
      }
    }

    WitnessChain w;
    auto adm = [](BinRel const& r) {
      return BinRel(r).set_kind_hint(RelKind::Admissible);
    };
    w.env.emplace("a", BinRel(in.alpha).set_kind_hint(RelKind::Congruence));
    w.env.emplace("R", adm(in.R));
    w.env.emplace("S", adm(in.S));
    auto const A = var("a", VarKind::Cong);
    auto const R = var("R", VarKind::Adm);
    auto const S = var("S", VarKind::Adm);
    std::vector<ExprPtr> Ts;
    if (along_path) {
      for (std::size_t l = 0; l < m; ++l) {
        std::string const name = "T" + std::to_string(l + 1);
        w.env.emplace(name, adm(in.Ts[l]));
        Ts.push_back(var(name, VarKind::Adm));
      }
    }

    std::vector<CompiledTerm> t;
    for (auto const& term : gumm.terms) {
      t.emplace_back(a, term);
    }
    Element const x = in.a, z = in.c;
    std::vector<ExprPtr> first{conv(R), S};
    if (improved) {
      w.env.emplace("T", adm(in.T));
      first.insert(first.begin(), var("T", VarKind::Adm));
    }
    w.elements.push_back(improved ? in.a_prime : in.a);
    w.elements.push_back(apply(t[0], {x, x, z}));
    w.stepLabels.push_back(meet({A, expr::gen(VarKind::Adm, first)}));

    std::size_t const blocks = defective ? gumm.n - 1 : gumm.n;
    for (std::size_t i = 1; i <= blocks; ++i) {
      bool const odd = i % 2 == 1;
      if (along_path) {
        for (std::size_t s = 1; s <= m; ++s) {
          std::size_t const l = odd ? s : m - s;
          w.elements.push_back(apply(t[i], {x, in.path[l], z}));
          w.stepLabels.push_back(odd ? meet({A, Ts[l - 1]})
                                     : meet({A, conv(Ts[l])}));
        }
      } else if (odd) {
        w.elements.push_back(apply(t[i], {x, in.b, z}));
        w.stepLabels.push_back(meet({A, R}));
        w.elements.push_back(apply(t[i], {x, z, z}));
        w.stepLabels.push_back(meet({A, S}));
      } else {
        w.elements.push_back(apply(t[i], {x, in.b, z}));
        w.stepLabels.push_back(meet({A, conv(S)}));
        w.elements.push_back(apply(t[i], {x, x, z}));
        w.stepLabels.push_back(meet({A, conv(R)}));
      }
    }
    if (defective) {
      w.elements.push_back(z);
      w.stepLabels.push_back(meet({A, expr::gen(VarKind::Adm, {R, conv(S)})}));
    }
    return checked(a, std::move(w));
  }

  ////////////////////////////////////////////////////////////////////////
  // Jonsson to Day
  ////////////////////////////////////////////////////////////////////////

  TermChain jonsson_to_day(TermChain const& j) {
    require(j.scheme == Scheme::Jonsson, "expected a Jonsson chain");
    require(j.n % 2 == 0, "n odd: pad the chain first");
    require(j.n > 0, "n must be positive");
    require(j.terms.size() == expected_terms(Scheme::Jonsson, j.n),
            "malformed chain");
    std::size_t const n = j.n;
    Term const        X = Term::var(0), Y = Term::var(1), Z = Term::var(2),
            W = Term::var(3);
    auto sub = [&](std::size_t i, Term const& u, Term const& v, Term const& t) {
      std::vector<Term> vars{u, v, t};
      return substitute(j.terms.at(i), vars);
    };
    TermChain d{Scheme::Day, 2 * n, {}};
    for (std::size_t i = 0; i + 1 < 2 * n; ++i) {
      std::size_t const q = i / 4;
      switch (i % 4) {
        case 0: d.terms.push_back(sub(2 * q, X, Y, W)); break;
        case 1: d.terms.push_back(sub(2 * q + 1, X, Y, W)); break;
        case 2: d.terms.push_back(sub(2 * q + 1, X, Z, W)); break;
        default: d.terms.push_back(sub(2 * q + 2, X, Z, W)); break;
      }
    }
    d.terms.push_back(sub(n, Y, Z, W));
    d.terms.push_back(W);
    return d;
  }

  TermChain jonsson_to_day(FiniteAlgebra const& a, TermChain const& j) {
    require_verified(a, j, Scheme::Jonsson);
    TermChain d = jonsson_to_day(j);
    auto      v = verify_chain(a, d);
    if (!v.valid()) {
      throw std::logic_error("Day chain fails " + v.failures[0].equation);
    }
    return d;
  }

  TermChain jonsson_even(TermChain const& j) {
    require(j.scheme == Scheme::Jonsson, "expected a Jonsson chain");
    return j.n % 2 == 0 ? j : pad_chain(j);
  }

  ////////////////////////////////////////////////////////////////////////
  // Paths in the free algebra
  ////////////////////////////////////////////////////////////////////////

  namespace {
    using Vec = std::vector<Element>;

    struct Zig {
      std::vector<Vec> z;
      std::string      lab;
    };

    class PathBuilder {
     public:
      PathBuilder(FiniteAlgebra const& a, TermChain const& day, std::size_t N)
          : _n(N) {
        for (auto const& t : day.terms) {
          _d.emplace_back(a, t);
        }
      }

      Vec apply(std::size_t i, Vec const& p, Vec const& q, Vec const& r,
                Vec const& s) const {
        Vec                  out(_n);
        std::vector<Element> args(4);
        for (std::size_t t = 0; t < _n; ++t) {
          args = {p[t], q[t], r[t], s[t]};
          out[t] = _d[i](args);
        }
        return out;
      }

      // Steps of z alternate starting with 'b'.
      Zig solve(Zig const& z) const {
        std::size_t const L = z.lab.size();
        if (L <= 1) {
          return z;
        }
        if (L % 2 == 0) {
          Zig head{{z.z.begin(), z.z.end() - 1}, z.lab.substr(0, L - 1)};
          Zig out = solve(head);
          push(out, z.z.back(), 'g');
          return out;
        }
        std::size_t const r = L % 4 == 3 ? (L - 3) / 4 : (L - 1) / 4;
        std::size_t const s = 2 * r + 1;
        Zig               P, Q;
        bool const        joined = L % 4 == 3;
        if (joined) {
          P = {{z.z.begin(), z.z.begin() + s + 1}, z.lab.substr(0, s)};
          Q = {{z.z.begin() + s + 1, z.z.end()}, z.lab.substr(s + 1)};
        } else {
          P = {{z.z.begin(), z.z.begin() + 2 * r + 1}, z.lab.substr(0, 2 * r)};
          P.z.push_back(P.z.back());
          P.lab += 'b';
          Q = {{z.z.begin() + 2 * r, z.z.end()}, z.lab.substr(2 * r)};
        }
        auto [A, B] = halves(P, r);
        auto [C, D] = halves(Q, r);
        std::size_t const k = _d.size() - 1;
        Zig               out;
        out.z.push_back(z.z.front());
        for (std::size_t i = 0; i < k; ++i) {
          if (i % 2 == 1) {
            push(out, apply(i + 1, A.z[0], B.z[0], C.z[0], D.z[0]), 'g');
            continue;
          }
          Zig delta;
          for (std::size_t j = 0; j <= r; ++j) {
            delta.z.push_back(apply(i, A.z[j], B.z[j], C.z[j], D.z[j]));
          }
          for (std::size_t j = r + 1; j-- > 0;) {
            delta.z.push_back(apply(i + 1, A.z[j], B.z[j], C.z[j], D.z[j]));
          }
          for (std::size_t j = 0; j < r; ++j) {
            delta.lab += A.lab[j];
          }
          delta.lab += A.lab[r];
          for (std::size_t j = r; j-- > 0;) {
            delta.lab += A.lab[j];
          }
          Zig sub = solve(delta);
          for (std::size_t j = 1; j < sub.z.size(); ++j) {
            push(out, sub.z[j], sub.lab[j - 1]);
          }
        }
        return out;
      }

      // Drops trivial steps and merges repeated labels.
      static void push(Zig& out, Vec const& v, char label) {
        if (v == out.z.back()) {
          return;
        }
        if (!out.lab.empty() && out.lab.back() == label) {
          out.z.back() = v;
          if (out.z.size() >= 2 && out.z[out.z.size() - 2] == v) {
            out.z.pop_back();
            out.lab.pop_back();
          }
          return;
        }
        out.z.push_back(v);
        out.lab += label;
      }

     private:
      // R-chains of length r+1 from both ends of a D-chain of length 2r+1
      // to its middle element.
      static std::pair<Zig, Zig> halves(Zig const& P, std::size_t r) {
        std::size_t const s = 2 * r + 1;
        Zig               first{{P.z.begin(), P.z.begin() + r + 2},
                  P.lab.substr(0, r + 1)};
        Zig               second;
        for (std::size_t j = s + 1; j-- > r + 1;) {
          second.z.push_back(P.z[j]);
        }
        for (std::size_t j = s; j-- > r + 1;) {
          second.lab += P.lab[j];
        }
        second.z.push_back(second.z.back());
        second.lab += P.lab[r];
        return {first, second};
      }

      std::size_t               _n;
      std::vector<CompiledTerm> _d;
    };

    std::size_t tuple_count(FiniteAlgebra const& a, std::size_t g,
                            std::size_t limit) {
      return checked_pow(a.size(), g, limit);
    }

    Vec projection(std::size_t n, std::size_t g, std::size_t i,
                   std::size_t N) {
      Vec         v(N);
      std::size_t stride = 1;
      for (std::size_t j = i + 1; j < g; ++j) {
        stride *= n;
      }
      for (std::size_t t = 0; t < N; ++t) {
        v[t] = static_cast<Element>((t / stride) % n);
      }
      return v;
    }
  }  // namespace

  FreePath day_path(FiniteAlgebra const& a,
                    TermChain const&     day,
                    std::size_t          m,
                    std::size_t          max_tuples) {
    require(day.scheme == Scheme::Day, "expected a Day chain");
    require(m >= 1, "m must be positive");
    std::size_t const g = m + 1;
    std::size_t const N = tuple_count(a, g, max_tuples);
    PathBuilder       pb(a, day, N);
    Zig               z;
    for (std::size_t i = 0; i < g; ++i) {
      z.z.push_back(projection(a.size(), g, i, N));
      if (i > 0) {
        z.lab += i % 2 == 1 ? 'b' : 'g';
      }
    }
    Zig      raw = pb.solve(z);
    Zig      norm;
    norm.z.push_back(raw.z.front());
    for (std::size_t j = 1; j < raw.z.size(); ++j) {
      PathBuilder::push(norm, raw.z[j], raw.lab[j - 1]);
    }
    FreePath p;
    p.m        = m;
    p.elements = std::move(norm.z);
    p.labels   = std::move(norm.lab);
    return p;
  }

  std::string path_defect(FiniteAlgebra const& a, FreePath const& p) {
    std::size_t const g = p.m + 1;
    std::size_t const n = a.size();
    std::size_t const N = tuple_count(a, g, SIZE_MAX);
    if (p.elements.empty() || p.labels.size() + 1 != p.elements.size()) {
      return "labels do not match steps";
    }
    for (auto const& e : p.elements) {
      if (e.size() != N) {
        return "element of the wrong length";
      }
    }
    GenericConfig const c = generic_configuration(catalog_identity("DAY", {p.m}));
    if (p.elements.front() != projection(n, g, c.first, N)
        || p.elements.back() != projection(n, g, c.last, N)) {
      return "endpoints are not the generic pair";
    }
    // u and v agree on every assignment constant on the classes of map
    auto same = [&](Vec const& u, Vec const& v, std::vector<std::size_t> const& map) {
      std::vector<Element> t(g);
      for (std::size_t code = 0; code < N; ++code) {
        std::size_t rest = code;
        for (std::size_t i = g; i-- > 0;) {
          t[i] = static_cast<Element>(rest % n);
          rest /= n;
        }
        bool fixed = true;
        for (std::size_t i = 0; i < g && fixed; ++i) {
          fixed = t[i] == t[map[i]];
        }
        if (fixed && u[code] != v[code]) {
          return false;
        }
      }
      return true;
    };
    auto const ma = identification_map(c, "a");
    auto const mb = identification_map(c, "b");
    auto const mg = identification_map(c, "g");
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
      char const l = p.labels[i];
      if (l != 'b' && l != 'g') {
        return "unknown label";
      }
      auto const& u = p.elements[i];
      auto const& v = p.elements[i + 1];
      if (!same(u, v, ma) || !same(u, v, l == 'b' ? mb : mg)) {
        return "step " + std::to_string(i) + " leaves a & " + l;
      }
    }
    return {};
  }

  SpectrumResult certified_day(FiniteAlgebra const& a,
                               TermChain const&     day,
                               std::size_t          m,
                               bool                 reversed,
                               EngineOptions const& opts) {
    char const*    family = reversed ? "DAY_REV" : "DAY";
    SpectrumResult res;
    res.family = family;
    res.params = {m};
    res.cap    = opts.spectrum_cap;
    res.status = SpectrumStatus::Unchecked;
    FreePath p;
    try {
      p = day_path(a, day, m);
    } catch (CapExceeded const& e) {
      res.evidence = e.what();
      return res;
    }
    if (auto d = path_defect(a, p); !d.empty()) {
      throw std::logic_error("Day path invalid: " + d);
    }
    std::size_t const upper = p.length(reversed);
    std::string const built = "path of " + std::to_string(upper)
                              + " factors from " + std::to_string(day.n + 1)
                              + " Day terms";
    if (upper == 0) {
      res.value  = 0;
      res.status = SpectrumStatus::Found;
      res.evidence = built;
      return res;
    }
    Identity const id = catalog_identity(family, {m});
    try {
      Verdict v = projection_check(a, id, {{"k", upper - 1}},
                                   monotone_assignments(a.size(), m + 1), opts);
      if (!v.holds) {
        res.value    = upper;
        res.status   = SpectrumStatus::Found;
        res.evidence = built + "; fails at k=" + std::to_string(upper - 1)
                       + " " + v.evidence;
        return res;
      }
    } catch (CapExceeded const&) {
    }
    res.evidence = built + "; value at most " + std::to_string(upper);
    return res;
  }

}  // namespace cmod
