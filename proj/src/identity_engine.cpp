#include "cmod/identity_engine.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cmod/catalog.hpp"
#include "cmod/error.hpp"

namespace cmod {

  ////////////////////////////////////////////////////////////////////////
  // FreeCache
  ////////////////////////////////////////////////////////////////////////

  std::shared_ptr<FreeAlgebra const> FreeCache::get(FiniteAlgebra const& a,
                                                    std::size_t          g,
                                                    FreeOptions const& opts) {
    FiniteAlgebra base = variety_base(a);
    std::string   key  = std::to_string(g) + "#" + std::to_string(opts.cap_entries)
                      + "#" + std::to_string(opts.cap_work) + "#"
                      + std::to_string(base.size());
    for (std::size_t op = 0; op < base.num_ops(); ++op) {
      key += "|" + base.signature()[op].name + ":";
      for (auto x : base.table(op)) {
        key += static_cast<char>('0' + x);
      }
    }
    std::lock_guard<std::mutex> lock(_mu);
    if (auto it = _done.find(key); it != _done.end()) {
      return it->second;
    }
    if (auto it = _failed.find(key); it != _failed.end()) {
      throw CapExceeded(it->second);
    }
    try {
      auto f = std::make_shared<FreeAlgebra const>(build_free(base, g, opts));
      _done.emplace(key, f);
      return f;
    } catch (CapExceeded const& e) {
      _failed.emplace(key, e.what());
      throw;
    }
  }

  std::size_t FreeCache::size() const {
    std::lock_guard<std::mutex> lock(_mu);
    return _done.size();
  }

  ////////////////////////////////////////////////////////////////////////
  // Generic configuration
  ////////////////////////////////////////////////////////////////////////

  namespace {
    class ConfigBuilder {
     public:
      explicit ConfigBuilder(Identity const& id) : _id(id) {}

      GenericConfig run() {
        _c.nodes = 1;
        _c.first = 0;
        _c.last  = chain(*_id.lhs, 0);
        return std::move(_c);
      }

     private:
      [[noreturn]] static void outside(std::string const& why) {
        throw std::invalid_argument("left side outside the generic grammar: "
                                    + why);
      }

      std::size_t fresh() {
        return _c.nodes++;
      }

      void edge(RelExpr const& v, std::size_t x, std::size_t y) {
        if (v.kind != VarKind::Cong) {
          outside("'" + v.name + "' is not a congruence variable");
        }
        _c.edges[v.name].emplace_back(x, y);
      }

      std::size_t chain(RelExpr const& e, std::size_t start) {
        using Op = RelExpr::Op;
        switch (e.op) {
          case Op::Compose: {
            std::size_t cur = start;
            for (auto const& a : e.args) {
              cur = atom(*a, cur);
            }
            return cur;
          }
          case Op::Alt:
          case Op::Power: {
            if (e.count.symbolic()) {
              outside("symbolic count on the left");
            }
            std::size_t cur = start;
            for (std::size_t i = 0; i < e.count.value; ++i) {
              cur = atom(*e.args[e.op == Op::Alt ? i % 2 : 0], cur);
            }
            return cur;
          }
          default: return atom(e, start);
        }
      }

      std::size_t atom(RelExpr const& e, std::size_t start) {
        using Op = RelExpr::Op;
        switch (e.op) {
          case Op::Var: {
            std::size_t end = fresh();
            edge(e, start, end);
            return end;
          }
          case Op::Meet: {
            std::vector<RelExpr const*> vars;
            RelExpr const*              sub = nullptr;
            for (auto const& a : e.args) {
              if (a->op == Op::Var) {
                vars.push_back(a.get());
              } else if (sub) {
                outside("an intersection with two sub-chains");
              } else {
                sub = a.get();
              }
            }
            std::size_t end = sub ? chain(*sub, start) : fresh();
            for (auto v : vars) {
              edge(*v, start, end);
            }
            return end;
          }
          case Op::Compose:
          case Op::Alt:
          case Op::Power: return chain(e, start);
          case Op::Converse: outside("converse");
          case Op::Gen: outside("closure");
        }
        outside("unknown node");
      }

      Identity const& _id;
      GenericConfig   _c;
    };

    std::vector<std::size_t> collapse(
        std::size_t                                             nodes,
        std::vector<std::pair<std::size_t, std::size_t>> const& edges) {
      std::vector<std::size_t> parent(nodes);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](std::size_t x) {
        while (parent[x] != x) {
          x = parent[x] = parent[parent[x]];
        }
        return x;
      };
      for (auto [x, y] : edges) {
        std::size_t rx = find(x), ry = find(y);
        if (rx != ry) {
          parent[std::max(rx, ry)] = std::min(rx, ry);
        }
      }
      std::vector<std::size_t> map(nodes);
      for (std::size_t i = 0; i < nodes; ++i) {
        map[i] = find(i);
      }
      return map;
    }

    bool all_cong(Identity const& id) {
      return std::all_of(id.vars.begin(), id.vars.end(), [](auto const& v) {
        return v.second == VarKind::Cong;
      });
    }
  }  // namespace

  GenericConfig generic_configuration(Identity const& id) {
    if (!all_cong(id)) {
      throw std::invalid_argument(
          "left side outside the generic grammar: non-congruence variables");
    }
    return ConfigBuilder(id).run();
  }

  bool pw_checkable(Identity const& id, std::string* why) {
    try {
      generic_configuration(id);
      return true;
    } catch (std::invalid_argument const& e) {
      if (why) {
        *why = e.what();
      }
      return false;
    }
  }

  std::string describe(GenericConfig const& c) {
    std::string out = "generators x0..x" + std::to_string(c.nodes - 1) + ";";
    for (auto const& [v, es] : c.edges) {
      out += " " + v + " by";
      for (auto [x, y] : es) {
        out += " (x" + std::to_string(x) + ",x" + std::to_string(y) + ")";
      }
      out += ";";
    }
    return out + " pair (x" + std::to_string(c.first) + ",x"
           + std::to_string(c.last) + ")";
  }

  ////////////////////////////////////////////////////////////////////////
  // Pixley-Wille check
  ////////////////////////////////////////////////////////////////////////

  namespace {
    class GenericInstance {
     public:
      GenericInstance(FiniteAlgebra const& a,
                      Identity const&      id,
                      FreeCache&           cache,
                      EngineOptions const& opts)
          : _id(id), _config(generic_configuration(id)) {
        _free = cache.get(a, _config.nodes, opts.free);
        for (auto const& [name, kind] : id.vars) {
          auto it = _config.edges.find(name);
          auto map
              = collapse(_config.nodes,
                         it == _config.edges.end()
                             ? std::vector<std::pair<std::size_t, std::size_t>>{}
                             : it->second);
          _env.emplace(name, _free->kernel(map));
        }
        if (has_closure(*id.rhs)) {
          _alg.emplace(_free->as_algebra(opts.closure_cap));
        }
        _ev.emplace(_alg ? &*_alg : nullptr, _free->size(), _env);
      }

      bool holds(Params const& params) {
        return _ev->contains(*_id.rhs, _free->generator(_config.first),
                             _free->generator(_config.last), params);
      }

      GenericConfig const& config() const {
        return _config;
      }
      FreeAlgebra const& free() const {
        return *_free;
      }
      Env const& env() const {
        return _env;
      }

     private:
      Identity const&                    _id;
      GenericConfig                      _config;
      std::shared_ptr<FreeAlgebra const> _free;
      Env                                _env;
      std::optional<FiniteAlgebra>       _alg;
      std::optional<Evaluator>           _ev;
    };

    std::string params_string(Params const& p) {
      std::string out;
      for (auto const& [k, v] : p) {
        out += (out.empty() ? "" : ",") + k + "=" + std::to_string(v);
      }
      return out;
    }
  }  // namespace

  Verdict pw_check(FiniteAlgebra const& a,
                   Identity const&      id,
                   Params const&        params,
                   FreeCache&           cache,
                   EngineOptions const& opts) {
    GenericInstance inst(a, id, cache, opts);
    Verdict         v;
    v.variety_level = true;
    v.tried         = 1;
    v.holds         = inst.holds(params);
    if (!v.holds) {
      v.counterexample = inst.env();
      v.evidence = "in F(" + std::to_string(inst.config().nodes) + ") with "
                   + std::to_string(inst.free().size()) + " elements: "
                   + describe(inst.config()) + " not in the right side"
                   + (params.empty() ? "" : " at " + params_string(params));
    }
    return v;
  }

  Verdict pw_check(FiniteAlgebra const& a,
                   Identity const&      id,
                   Params const&        params,
                   EngineOptions const& opts) {
    FreeCache cache;
    return pw_check(a, id, params, cache, opts);
  }

  std::vector<std::size_t> identification_map(GenericConfig const& c,
                                              std::string_view     var) {
    auto it = c.edges.find(var);
    return collapse(c.nodes,
                    it == c.edges.end()
                        ? std::vector<std::pair<std::size_t, std::size_t>>{}
                        : it->second);
  }

  std::vector<std::vector<Element>> monotone_assignments(std::size_t n,
                                                         std::size_t g) {
    std::vector<std::vector<Element>> out;
    std::vector<Element>              cur;
    std::function<void(Element)> rec = [&](Element lo) {
      if (cur.size() == g) {
        out.push_back(cur);
        return;
      }
      for (Element v = lo; v < n; ++v) {
        cur.push_back(v);
        rec(v);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  }

  Verdict projection_check(FiniteAlgebra const&                     a,
                           Identity const&                          id,
                           Params const&                            params,
                           std::vector<std::vector<Element>> const& assignments,
                           EngineOptions const&                     opts) {
    GenericConfig const c = generic_configuration(id);
    std::vector<std::vector<Element>> gens(
        c.nodes, std::vector<Element>(assignments.size()));
    for (std::size_t s = 0; s < assignments.size(); ++s) {
      if (assignments[s].size() != c.nodes) {
        throw std::invalid_argument("assignment of wrong length");
      }
      for (std::size_t i = 0; i < c.nodes; ++i) {
        gens[i][s] = assignments[s][i];
      }
    }
    Subpower sub = generated_subpower(a, gens, opts.projection_size,
                                      opts.closure_cap);
    Env env;
    for (auto const& [name, kind] : id.vars) {
      PairSet seed;
      if (auto it = c.edges.find(name); it != c.edges.end()) {
        for (auto [x, y] : it->second) {
          seed.emplace_back(static_cast<Element>(sub.generators[x]),
                            static_cast<Element>(sub.generators[y]));
        }
      }
      env.emplace(name, generate(sub.algebra, seed, RelKind::Congruence));
    }
    Evaluator ev(&sub.algebra, sub.algebra.size(), env);
    Verdict   v;
    v.tried = 1;
    v.holds = ev.contains(*id.rhs, sub.generators[c.first],
                          sub.generators[c.last], params);
    if (!v.holds) {
      v.variety_level  = true;
      v.counterexample = env;
      v.pair = Pair(static_cast<Element>(sub.generators[c.first]),
                    static_cast<Element>(sub.generators[c.last]));
      v.evidence = "in a subpower with " + std::to_string(sub.algebra.size())
                   + " elements on " + std::to_string(assignments.size())
                   + " coordinates: " + describe(c) + " not in the right side"
                   + (params.empty() ? "" : " at " + params_string(params));
    }
    return v;
  }

  ////////////////////////////////////////////////////////////////////////
  // Concrete checks
  ////////////////////////////////////////////////////////////////////////

  std::vector<BinRel> relation_family(FiniteAlgebra const& a,
                                      VarKind              kind,
                                      EngineOptions const& opts) {
    if (kind == VarKind::Cong) {
      return all_congruences(a, opts.cong_cap);
    }
    RelKind const       want = rel_kind(kind);
    std::size_t const   n    = a.size();
    std::vector<BinRel> out;
    if (n <= opts.enum_size) {
      PairSet off;
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (x != y) {
            off.emplace_back(x, y);
          }
        }
      }
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << off.size());
           ++mask) {
        BinRel r(n);
        for (std::size_t i = 0; i < off.size(); ++i) {
          if ((mask >> i) & 1U) {
            r.insert(off[i].first, off[i].second);
          }
        }
        if (is_compatible(a, r, want)) {
          r.set_kind_hint(want);
          out.push_back(std::move(r));
        }
      }
      return out;
    }
    PairSet off;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x != y) {
          off.emplace_back(x, y);
        }
      }
    }
    std::set<std::vector<std::uint64_t>> seen;
    auto add = [&](PairSet const& seed) {
      BinRel r = generate(a, seed, want);
      auto   d = r.data();
      if (seen.emplace(d.begin(), d.end()).second) {
        out.push_back(std::move(r));
      }
    };
    add({});
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (!pick.empty()) {
        PairSet seed;
        for (auto i : pick) {
          seed.push_back(off[i]);
        }
        add(seed);
      }
      if (pick.size() == opts.seed_pairs) {
        return;
      }
      for (std::size_t i = from; i < off.size(); ++i) {
        pick.push_back(i);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
    return out;
  }

  namespace {
    // Odometer over one relation family per declared variable.
    class Assignments {
     public:
      Assignments(FiniteAlgebra const& a,
                  Identity const&      id,
                  CheckMode            mode,
                  EngineOptions const& opts)
          : _id(id) {
        std::map<VarKind, std::vector<BinRel>> fam;
        for (auto const& [name, kind] : id.vars) {
          if (kind != VarKind::Cong && mode == CheckMode::AllCongTuples) {
            throw std::invalid_argument(
                "'" + name
                + "' is not a congruence variable; use relation enumeration");
          }
          if (!fam.contains(kind)) {
            fam.emplace(kind, relation_family(a, kind, opts));
          }
        }
        std::size_t total = 1;
        for (auto const& [name, kind] : id.vars) {
          _domains.push_back(fam.at(kind));
          total = checked_mul(total, _domains.back().size(),
                              opts.assignment_cap);
        }
        _total = total;
        _at.assign(id.vars.size(), 0);
      }

      std::size_t total() const {
        return _total;
      }

      Env env() const {
        Env e;
        for (std::size_t i = 0; i < _at.size(); ++i) {
          e.emplace(_id.vars[i].first, _domains[i][_at[i]]);
        }
        return e;
      }

      bool next() {
        for (std::size_t i = _at.size(); i-- > 0;) {
          if (++_at[i] < _domains[i].size()) {
            return true;
          }
          _at[i] = 0;
        }
        return false;
      }

     private:
      static std::size_t checked_mul(std::size_t x, std::size_t y,
                                     std::size_t cap) {
        if (y != 0 && x > cap / y) {
          throw CapExceeded("more than " + std::to_string(cap)
                            + " variable assignments");
        }
        return x * y;
      }

      Identity const&                  _id;
      std::vector<std::vector<BinRel>> _domains;
      std::vector<std::size_t>         _at;
      std::size_t                      _total = 0;
    };

    std::optional<Pair> escape(BinRel const& lhs, BinRel const& rhs) {
      for (std::size_t x = 0; x < lhs.size(); ++x) {
        for (std::size_t y = 0; y < lhs.size(); ++y) {
          if (lhs.contains(x, y) && !rhs.contains(x, y)) {
            return Pair(x, y);
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace

  Verdict check_concrete(FiniteAlgebra const& a,
                         Identity const&      id,
                         CheckMode            mode,
                         Params const&        params,
                         EngineOptions const& opts) {
    Assignments as(a, id, mode, opts);
    Verdict     v;
    if (as.total() == 0) {
      return v;
    }
    do {
      Env       env = as.env();
      Evaluator ev(&a, a.size(), env);
      ++v.tried;
      BinRel lhs = ev.eval(*id.lhs, params);
      BinRel rhs = ev.eval(*id.rhs, params);
      if (auto p = escape(lhs, rhs)) {
        v.holds          = false;
        v.pair           = p;
        v.counterexample = std::move(env);
        v.evidence       = "pair (" + std::to_string(p->first) + ","
                     + std::to_string(p->second)
                     + ") in the left side, not in the right side";
        return v;
      }
    } while (as.next());
    return v;
  }

  ////////////////////////////////////////////////////////////////////////
  // Spectra
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(SpectrumStatus s) noexcept {
    switch (s) {
      case SpectrumStatus::Found: return "ok";
      case SpectrumStatus::ExceedsCap: return "exceeds cap";
      case SpectrumStatus::Unchecked: return "unchecked";
    }
    return "?";
  }

  namespace {
    std::string env_string(Env const& env) {
      std::string out;
      for (auto const& [name, r] : env) {
        out += (out.empty() ? "" : "; ") + name + " =";
        for (auto [x, y] : r.pairs()) {
          if (x != y) {
            out += " (" + std::to_string(x) + "," + std::to_string(y) + ")";
          }
        }
      }
      return out;
    }

    void monotonicity_failure(std::string const& where, std::size_t k) {
      throw std::logic_error("inclusion not monotone in k at k="
                             + std::to_string(k) + " (" + where + ")");
    }

    SpectrumResult pw_spectrum(FiniteAlgebra const& a,
                               Identity const&      id,
                               std::string_view     symbol,
                               std::size_t          k_min,
                               FreeCache&           cache,
                               EngineOptions const& opts) {
      SpectrumResult res;
      res.cap = opts.spectrum_cap;
      std::optional<GenericInstance> inst;
      try {
        inst.emplace(a, id, cache, opts);
      } catch (CapExceeded const& e) {
        res.status   = SpectrumStatus::Unchecked;
        res.evidence = e.what();
        return res;
      }
      Params p;
      for (std::size_t k = k_min; k <= opts.spectrum_cap; ++k) {
        p[std::string(symbol)] = k;
        if (inst->holds(p)) {
          res.value = k;
          p[std::string(symbol)] = k + 1;
          if (!inst->holds(p)) {
            monotonicity_failure(a.name(), k);
          }
          if (k > k_min) {
            res.evidence = "fails at k=" + std::to_string(k - 1) + " in F("
                           + std::to_string(inst->config().nodes) + "): "
                           + describe(inst->config());
          }
          return res;
        }
      }
      res.status   = SpectrumStatus::ExceedsCap;
      res.evidence = "fails at k=" + std::to_string(opts.spectrum_cap);
      return res;
    }

    SpectrumResult concrete_spectrum(FiniteAlgebra const& a,
                                     Identity const&      id,
                                     std::string_view     symbol,
                                     std::size_t          k_min,
                                     EngineOptions const& opts) {
      SpectrumResult res;
      res.cap           = opts.spectrum_cap;
      res.algebra_level = true;
      std::optional<Assignments> as;
      try {
        as.emplace(a, id, CheckMode::EnumerateRelations, opts);
      } catch (CapExceeded const& e) {
        res.status   = SpectrumStatus::Unchecked;
        res.evidence = e.what();
        return res;
      }
      std::size_t K = k_min;
      Params      p;
      std::string const sym(symbol);
      if (as->total() == 0) {
        res.value = K;
        return res;
      }
      do {
        Env       env = as->env();
        Evaluator ev(&a, a.size(), env);
        BinRel    lhs = ev.eval(*id.lhs, p);
        bool      raised = false;
        for (;;) {
          p[sym] = K;
          if (lhs.subset_of(ev.eval(*id.rhs, p))) {
            break;
          }
          raised       = true;
          res.evidence = "fails at k=" + std::to_string(K) + " for "
                         + env_string(env);
          if (++K > opts.spectrum_cap) {
            res.status = SpectrumStatus::ExceedsCap;
            return res;
          }
        }
        if (raised) {
          p[sym] = K + 1;
          if (!lhs.subset_of(ev.eval(*id.rhs, p))) {
            monotonicity_failure(a.name(), K);
          }
        }
      } while (as->next());
      res.value = K;
      return res;
    }
  }  // namespace

  SpectrumResult identity_spectrum(FiniteAlgebra const& a,
                                   Identity const&      id,
                                   std::string_view     symbol,
                                   std::size_t          k_min,
                                   FreeCache&           cache,
                                   EngineOptions const& opts) {
    SpectrumResult res = pw_checkable(id)
                             ? pw_spectrum(a, id, symbol, k_min, cache, opts)
                             : concrete_spectrum(a, id, symbol, k_min, opts);
    res.family = id.name;
    return res;
  }

  SpectrumResult spectrum(FiniteAlgebra const&            a,
                          std::string_view                family,
                          std::vector<std::size_t> const& params,
                          FreeCache&                      cache,
                          EngineOptions const&            opts) {
    CatalogEntry const& e  = catalog_entry(family);
    Identity            id = catalog_identity(family, params);
    SpectrumResult      res
        = identity_spectrum(a, id, "k", e.k_min, cache, opts);
    res.params = params;
    for (std::size_t i = params.size(); i < e.defaults.size(); ++i) {
      res.params.push_back(e.defaults[i]);
    }
    return res;
  }

}  // namespace cmod
