#include "cmod/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "cmod/catalog.hpp"
#include "cmod/constructions.hpp"
#include "cmod/error.hpp"
#include "cmod/relation.hpp"
#include "cmod/term_chain.hpp"

namespace cmod {

  std::string Measure::str() const {
    switch (kind) {
      case Kind::Known:
        return std::to_string(value);
      case Kind::Above:
        return ">" + std::to_string(value);
      case Kind::Infinite:
        return "inf";
      case Kind::Unknown:
        break;
    }
    return "?";
  }

  char const* to_string(BoundStatus s) noexcept {
    switch (s) {
      case BoundStatus::Pass:
        return "pass";
      case BoundStatus::Fail:
        return "fail";
      case BoundStatus::Unchecked:
        return "unchecked";
      case BoundStatus::NotApplicable:
        return "n/a";
    }
    return "?";
  }

  bool Report::passed() const noexcept {
    return count(BoundStatus::Fail) == 0;
  }

  std::size_t Report::count(BoundStatus s) const noexcept {
    return std::count_if(bounds.begin(), bounds.end(),
                         [s](BoundCheck const& b) { return b.status == s; });
  }

  std::string nonmodular_witness(FiniteAlgebra const& a,
                                 FreeCache&           cache,
                                 EngineOptions const& opts) {
    for (std::size_t g = 2; g <= 3; ++g) {
      std::vector<BinRel> con;
      try {
        auto f = cache.get(a, g, opts.free);
        if (f->size() > 12) {
          break;
        }
        con = all_congruences(f->as_algebra(), 12);
      } catch (CapExceeded const&) {
        break;
      }
      for (auto const& al : con) {
        for (auto const& ga : con) {
          if (!ga.subset_of(al)) {
            continue;
          }
          for (auto const& be : con) {
            if (meet(al, cong_join(be, ga)) != cong_join(meet(al, be), ga)) {
              return "F(" + std::to_string(g) + ") with "
                     + std::to_string(con.size()) + " congruences";
            }
          }
        }
      }
    }
    return {};
  }

  SpectrumEntry measure_spectrum(FiniteAlgebra const&            a,
                                 std::string const&              family,
                                 std::vector<std::size_t> const& params,
                                 FreeCache&                      cache,
                                 EngineOptions const&            opts,
                                 TermChain const*                day,
                                 bool                            nonmodular) {
    SpectrumEntry e;
    e.family = family;
    e.params = params;
    e.result = spectrum(a, family, params, cache, opts);
    e.source = e.result.algebra_level ? "enumeration" : "pw";
    bool day_like = family == "DAY" || family == "DAY_REV";
    // every DSTAR left side contains the DAY(3) one
    bool above_day = day_like || family == "DSTAR";
    switch (e.result.status) {
      case SpectrumStatus::Found:
        e.value = Measure::known(*e.result.value);
        return e;
      case SpectrumStatus::ExceedsCap:
        e.value = Measure::above(e.result.cap);
        break;
      case SpectrumStatus::Unchecked:
        if (day_like && day && !params.empty()) {
          try {
            auto c = certified_day(a, *day, params[0], family == "DAY_REV", opts);
            if (c.status == SpectrumStatus::Found) {
              e.result = c;
              e.value  = Measure::known(*c.value);
              e.source = "path";
              return e;
            }
            e.result.evidence += "; " + c.evidence;
          } catch (CapExceeded const& ex) {
            e.result.evidence += std::string("; path: ") + ex.what();
          }
        }
        break;
    }
    if (above_day && nonmodular) {
      e.value  = Measure::infinite();
      e.source = "nonmodular";
    }
    return e;
  }

  namespace {
    using Ks     = std::vector<std::size_t>;
    using M      = Measure;

    std::string target_name(std::string const& family, Ks const& p) {
      std::string s = family + "(";
      for (std::size_t i = 0; i < p.size(); ++i) {
        s += (i ? "," : "") + std::to_string(p[i]);
      }
      return s + ")";
    }

    std::uint64_t even_up(std::uint64_t k) {
      return k + k % 2;
    }

    // Is x <= y?  nullopt when undecided.
    std::optional<bool> leq(M x, M y) {
      using K = M::Kind;
      if (x.kind == K::Unknown || y.kind == K::Unknown) {
        return std::nullopt;
      }
      if (y.kind == K::Infinite) {
        return true;
      }
      if (x.kind == K::Infinite) {
        return y.kind == K::Known ? std::optional<bool>(false) : std::nullopt;
      }
      if (x.kind == K::Known && y.kind == K::Known) {
        return x.value <= y.value;
      }
      if (x.kind == K::Known) {
        if (x.value <= y.value + 1) {
          return true;
        }
        return std::nullopt;
      }
      if (y.kind == K::Known && y.value <= x.value) {
        return false;
      }
      return std::nullopt;
    }

    std::optional<bool> eq(M x, M y) {
      auto a = leq(x, y), b = leq(y, x);
      if ((a && !*a) || (b && !*b)) {
        return false;
      }
      if (a && b) {
        return true;
      }
      return std::nullopt;
    }

    BoundStatus verdict(std::optional<bool> v) {
      if (!v) {
        return BoundStatus::Unchecked;
      }
      return *v ? BoundStatus::Pass : BoundStatus::Fail;
    }

    class Planner {
     public:
      Planner(FiniteAlgebra const& a, FreeCache& cache, ReportOptions const& o,
              Report& r, std::optional<TermChain> const& day)
          : _a(a), _cache(cache), _o(o), _r(r), _day(day) {}

      void want(std::string const& family, Ks const& p) {
        _want.emplace(family, p);
      }

      void measure() {
        std::vector<std::pair<std::string, Ks>> todo(_want.begin(),
                                                         _want.end());
        std::vector<SpectrumEntry> out(todo.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < todo.size(); ++i) {
          out[i] = one(todo[i].first, todo[i].second);
        }
        for (auto& e : out) {
          _got.emplace(std::make_pair(e.family, e.params), e.value);
          _r.spectra.push_back(std::move(e));
        }
      }

      M get(std::string const& family, Ks const& p) const {
        auto it = _got.find({family, p});
        return it == _got.end() ? M{} : it->second;
      }

     private:
      SpectrumEntry one(std::string const& family, Ks const& p) const {
        return measure_spectrum(_a, family, p, _cache, _o.engine,
                                _o.certify && _day ? &*_day : nullptr,
                                !_r.nonmodular.empty());
      }

      FiniteAlgebra const&             _a;
      FreeCache&                       _cache;
      ReportOptions const&             _o;
      Report&                          _r;
      std::optional<TermChain> const&  _day;
      std::set<std::pair<std::string, Ks>>      _want;
      std::map<std::pair<std::string, Ks>, M> _got;
    };

    class Checks {
     public:
      explicit Checks(Report& r) : _r(r) {}

      BoundCheck& row(std::string name, BoundParams p, std::string target) {
        _r.bounds.push_back({});
        BoundCheck& b = _r.bounds.back();
        b.name        = std::move(name);
        b.params      = std::move(p);
        b.target      = std::move(target);
        return b;
      }

      void na(std::string name, std::string why) {
        auto& b  = row(std::move(name), {}, "");
        b.status = BoundStatus::NotApplicable;
        b.note   = std::move(why);
      }

      void unchecked(std::string name, BoundParams p, std::string why) {
        auto& b  = row(std::move(name), std::move(p), "");
        b.status = BoundStatus::Unchecked;
        b.note   = std::move(why);
      }

      // measured <= bound(name, p).rhs.
      void formula(std::string const& name, BoundParams const& p,
                   std::string const& target, M measured) {
        BoundValue v = bound(name, p);
        auto&      b = row(name, p, target);
        b.claimed    = M::known(v.rhs);
        b.measured   = measured;
        b.status     = verdict(leq(measured, b.claimed));
      }

      void le(std::string name, BoundParams p, std::string target, M claimed,
              M measured, std::string note = {}) {
        auto& b    = row(std::move(name), std::move(p), std::move(target));
        b.claimed  = claimed;
        b.measured = measured;
        b.status   = verdict(leq(measured, claimed));
        b.note     = std::move(note);
      }

      void same(std::string name, BoundParams p, std::string target,
                M claimed, M measured) {
        auto& b    = row(std::move(name), std::move(p), std::move(target));
        b.relation = "==";
        b.claimed  = claimed;
        b.measured = measured;
        b.status   = verdict(eq(measured, claimed));
      }

     private:
      Report& _r;
    };

    std::string no_terms(char const* what, std::size_t max, bool capped) {
      return capped ? std::string("no ") + what + " search: free algebra exceeds caps"
                    : std::string("no ") + what + " terms up to "
                          + std::to_string(max);
    }
  }  // namespace

  Report consistency_report(FiniteAlgebra const& a,
                            std::string          name,
                            ReportOptions const& opts) {
    FreeCache cache;
    return consistency_report(a, std::move(name), cache, opts);
  }

  Report consistency_report(FiniteAlgebra const& a,
                            std::string          name,
                            FreeCache&           cache,
                            ReportOptions const& o) {
    if (o.m_from < 3 || o.m_to < o.m_from) {
      throw std::invalid_argument("need 3 <= m_from <= m_to");
    }
    Report r;
    r.algebra = std::move(name);
    FreeOptions const& fo = o.engine.free;

    std::optional<TermChain> day, gumm, jon;
    bool day_cap = false, gumm_cap = false, jon_cap = false;
    try {
      day = search_day(*cache.get(a, 4, fo), o.day_max);
    } catch (CapExceeded const&) {
      day_cap = true;
    }
    try {
      auto f3 = cache.get(a, 3, fo);
      gumm    = search_gumm(*f3, o.gumm_max);
      jon     = search_jonsson(*f3, o.jonsson_max, false);
    } catch (CapExceeded const&) {
      gumm_cap = jon_cap = true;
    }
    if (day) {
      r.day_k = day->n;
    }
    if (gumm) {
      r.gumm_n = gumm->n;
    }
    if (jon) {
      r.jonsson_n = jon->n;
    }
    if (!day) {
      r.nonmodular = nonmodular_witness(a, cache, o.engine);
    }

    std::size_t const lo = o.m_from, hi = o.m_to;
    auto in_range = [&](std::uint64_t m) { return m >= lo && m <= hi; };
    std::uint64_t const n1 = r.gumm_n ? std::max<std::size_t>(*r.gumm_n, 1) : 1;

    Planner plan(a, cache, o, r, day);
    for (std::size_t m = lo; m <= hi; ++m) {
      plan.want("DAY", {m});
      plan.want("DAY_REV", {m});
    }
    plan.want("DAY", {3});
    for (std::size_t l : {1, 2}) {
      plan.want("DSTAR", {l});
    }
    plan.want("TSCHANTZ", {2});
    for (std::size_t q : {1, 2}) {
      plan.want("QDIST", {q});
      plan.want("QDISTCONV", {q});
    }
    for (auto const& p : {Ks{1, 1}, Ks{1, 2}, Ks{2, 1}}) {
      plan.want("Q2", p);
    }
    for (std::size_t m : {2, 4, 6}) {
      plan.want("AGT", {m});
    }
    for (std::size_t m : {2, 6}) {
      plan.want("AGT_CONV", {m});
    }
    if (gumm) {
      plan.want("BBB", {n1});
    }
    for (char const* f : {"ED", "EDDD", "NTE"}) {
      plan.want(f, {});
    }
    plan.measure();

    auto D  = [&](std::uint64_t m) { return plan.get("DAY", {m}); };
    auto DR = [&](std::uint64_t m) { return plan.get("DAY_REV", {m}); };
    auto dname = [](std::uint64_t m) { return "DAY(" + std::to_string(m) + ")"; };

    Checks c(r);
    std::string const day_why  = no_terms("Day", o.day_max, day_cap);
    std::string const gumm_why = no_terms("Gumm", o.gumm_max, gumm_cap);

    auto day_formula = [&](std::string const& nm, BoundParams const& p) {
      BoundValue v = bound(nm, p);
      if (in_range(v.lhs)) {
        c.formula(nm, p, dname(v.lhs), D(v.lhs));
      }
    };

    // Day-term hypotheses
    if (day) {
      std::uint64_t k  = *r.day_k;
      std::uint64_t rr = std::max<std::uint64_t>(1, even_up(k) / 2);
      M d3 = D(3);
      if (d3.is_known()) {
        d3.value = std::max<std::uint64_t>(d3.value, 1);
      }
      c.same("DAY_TERMS", {{"k", k}}, "max(DAY(3),1)", M::known(k), d3);
      for (std::uint64_t q : {1, 2}) {
        day_formula("THM", {{"r", rr}, {"q", q}});
      }
      for (std::uint64_t q : {1, 2}) {
        c.formula("DST", {{"r", rr}, {"l", q}}, "DSTAR(" + std::to_string(q) + ")",
                  plan.get("DSTAR", {q}));
      }
      std::uint64_t kk = std::max<std::uint64_t>(k, 2);
      if (gumm) {
        c.formula("LTT", {{"k", kk}}, "Gumm terms", M::known(*r.gumm_n + 2));
      }
      for (char const* f : {"ED", "EDDD", "NTE"}) {
        c.formula(f, {{"k", std::max<std::uint64_t>(k, 1)}}, f,
                  plan.get(f, {}));
      }
      if (k <= 3) {
        for (std::uint64_t m = lo; m <= hi; ++m) {
          day_formula("SMALL_I", {{"m", m}});
        }
      } else {
        c.na("SMALL_I", "more than 4 Day terms");
      }
      if (k <= 4) {
        for (std::uint64_t q = 2; (std::uint64_t(1) << q) - 1 <= hi; ++q) {
          day_formula("SMALL_II", {{"q", q}});
        }
      } else {
        c.na("SMALL_II", "more than 5 Day terms");
      }
      if (gumm) {
        for (auto [p, q] : {std::pair<std::uint64_t, std::uint64_t>{1, 1},
                            {1, 2},
                            {2, 1}}) {
          day_formula("COMB", {{"r", rr}, {"n", *r.gumm_n}, {"p", p}, {"q", q}});
        }
      } else {
        c.na("COMB", gumm_why);
      }
    } else {
      for (char const* nm : {"DAY_TERMS", "THM", "DST", "LTT", "ED", "EDDD",
                             "NTE", "SMALL_I", "SMALL_II", "COMB"}) {
        c.na(nm, day_why);
      }
    }

    // (3,2r) read off the measured D(3)
    if (M d3 = D(3); d3.is_known()) {
      std::uint64_t rr = std::max<std::uint64_t>(1, even_up(d3.value) / 2);
      if (rr >= 2) {
        for (std::uint64_t i : {0, 1}) {
          day_formula("THM2", {{"h", 2}, {"r", rr}, {"i", i}});
        }
      } else {
        c.na("THM2", "needs D(3) > 2");
      }
    } else if (d3.kind == M::Kind::Infinite) {
      c.na("THM2", "not congruence modular");
    } else {
      c.unchecked("THM2", {}, "D(3) " + d3.str());
    }

    // Gumm-term hypotheses
    if (gumm) {
      std::uint64_t n = *r.gumm_n;
      day_formula("NUMD", {{"n", n}});
      std::uint64_t nd = std::max<std::uint64_t>(2, even_up(n));
      c.formula("NUMDD", {{"n", nd}}, "DAY_REV(3)", DR(3));
      for (std::uint64_t q : {1, 2}) {
        day_formula("QKMOD_I", {{"q", q}, {"n", n}});
      }
      for (std::uint64_t q : {2, 3}) {
        day_formula("QKMOD_II", {{"q", q}, {"n", n}});
      }
      for (std::uint64_t q : {1, 2}) {
        BoundParams p{{"q", q}, {"n", n}};
        c.formula("AGTCOR", p, "QDIST(" + std::to_string(q) + ")",
                  plan.get("QDIST", {q}));
        c.formula("AGTCOR", p, "QDISTCONV(" + std::to_string(q) + ")",
                  plan.get("QDISTCONV", {q}));
      }
      for (std::uint64_t m : {2, 4, 6}) {
        c.formula("AGT", {{"m", m}, {"n", n}}, "AGT(" + std::to_string(m) + ")",
                  plan.get("AGT", {m}));
        if (m % 4 == 2) {
          c.formula("AGT", {{"m", m}, {"n", n}},
                    "AGT_CONV(" + std::to_string(m) + ")",
                    plan.get("AGT_CONV", {m}));
        }
      }
      for (std::uint64_t rr : {1, 2}) {
        M s = plan.get("Q2", {rr, 1});
        if (!s.is_known()) {
          c.unchecked("AGTCOR2", {{"r", rr}}, "hypothesis Q2 " + s.str());
          continue;
        }
        std::uint64_t sv = std::max<std::uint64_t>(1, s.value);
        for (std::uint64_t q = 1; (std::uint64_t(1) << q) * rr + 1 <= 5; ++q) {
          c.formula("AGTCOR2", {{"r", rr}, {"s", sv}, {"q", q}, {"n", n}},
                    target_name("Q2", {rr, q}), plan.get("Q2", {rr, q}));
        }
      }
      for (std::uint64_t h = 1; 2 * h + 1 <= hi; ++h) {
        M t = D(2 * h + 1);
        if (!t.is_known()) {
          c.unchecked("QKMOD2", {{"h", h}}, "hypothesis " + dname(2 * h + 1)
                                                + " " + t.str());
          continue;
        }
        for (std::uint64_t p = 1; (std::uint64_t(1) << p) * (h + 1) - 1 <= hi;
             ++p) {
          day_formula("QKMOD2",
                      {{"h", h}, {"t", even_up(t.value)}, {"p", p}, {"n", n}});
        }
      }
      day_formula("BBB", {{"n", n1}});
      c.le("BBB", {{"n", n1}}, target_name("BBB", {n1}), M::known(2 * n1),
           plan.get("BBB", {n1}), "last alternation of the five-factor form");
      c.same("TSCHANTZ_GUMM", {{"n", n}}, "TSCHANTZ(2)", M::known(n),
             plan.get("TSCHANTZ", {2}));
    } else {
      for (char const* nm :
           {"NUMD", "NUMDD", "QKMOD_I", "QKMOD_II", "AGTCOR", "AGT", "AGTCOR2",
            "QKMOD2", "BBB", "TSCHANTZ_GUMM"}) {
        c.na(nm, gumm_why);
      }
    }

    if (jon && day) {
      std::uint64_t nj = std::max<std::uint64_t>(2, even_up(jon->n));
      c.formula("DM", {{"n", nj}}, "Day terms", M::known(*r.day_k));
    } else {
      c.na("DM", jon ? day_why
                     : no_terms("Jonsson", o.jonsson_max, jon_cap));
    }

    // Spectrum shape
    c.same("DSTAR_BASE", {}, "DSTAR(1)", D(3), plan.get("DSTAR", {1}));
    for (std::uint64_t m = lo; m <= hi; ++m) {
      M x = D(m), y = DR(m);
      auto& b = c.row("DAY_GAP", {{"m", m}}, "|DAY - DAY_REV|");
      b.claimed = M::known(1);
      if (x.kind == M::Kind::Infinite && y.kind == M::Kind::Infinite) {
        b.measured = M::known(0);
      } else if (x.is_known() && y.is_known()) {
        b.measured = M::known(x.value > y.value ? x.value - y.value
                                                : y.value - x.value);
      } else if ((x.kind == M::Kind::Infinite && y.is_known())
                 || (y.kind == M::Kind::Infinite && x.is_known())) {
        b.measured = M::infinite();
      }
      b.status = verdict(leq(b.measured, b.claimed));
      if (m % 2 == 1) {
        if (x.is_known() && x.value % 2 == 0) {
          c.le("DAY_REV_EVEN", {{"m", m}}, "DAY_REV(" + std::to_string(m) + ")",
               x, y, "bounded by an even DAY value");
        }
        if (y.is_known() && y.value % 2 == 0) {
          c.le("DAY_REV_EVEN", {{"m", m}}, dname(m), y, x,
               "bounded by an even DAY_REV value");
        }
      }
      if (m < hi) {
        c.le("MONO", {{"m", m}}, dname(m), D(m + 1), x);
        if (m % 2 == 1) {
          M next = x.is_known() ? M::known(x.value + 1) : x;
          c.le("STEP", {{"m", m}}, dname(m + 1), next, D(m + 1));
        }
      }
    }

    std::stable_sort(r.bounds.begin(), r.bounds.end(),
                     [](BoundCheck const& x, BoundCheck const& y) {
                       return std::tie(x.name, x.params, x.target)
                              < std::tie(y.name, y.params, y.target);
                     });
    std::stable_sort(r.spectra.begin(), r.spectra.end(),
                     [](SpectrumEntry const& x, SpectrumEntry const& y) {
                       return std::tie(x.family, x.params)
                              < std::tie(y.family, y.params);
                     });
    return r;
  }

  namespace {
    nlohmann::ordered_json measure_json(Measure const& m) {
      switch (m.kind) {
        case Measure::Kind::Known:
          return m.value;
        case Measure::Kind::Above:
          return m.str();
        case Measure::Kind::Infinite:
          return "inf";
        case Measure::Kind::Unknown:
          break;
      }
      return nullptr;
    }

    template <class T>
    nlohmann::ordered_json opt_json(std::optional<T> const& v) {
      return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    }
  }  // namespace

  std::string report_json(Report const& r, int indent) {
    using J = nlohmann::ordered_json;
    J j;
    j["algebra"]    = r.algebra;
    j["dayK"]       = opt_json(r.day_k);
    j["gummN"]      = opt_json(r.gumm_n);
    j["jonssonN"]   = opt_json(r.jonsson_n);
    j["nonmodular"] = r.nonmodular;
    j["spectra"]    = J::array();
    for (auto const& s : r.spectra) {
      J e;
      e["family"] = s.family;
      e["params"] = s.params;
      e["m"]      = s.params.empty() ? J(nullptr) : J(s.params[0]);
      e["value"]  = measure_json(s.value);
      e["status"] = s.value.is_known() || s.value.kind == Measure::Kind::Infinite
                        ? "ok"
                        : to_string(s.result.status);
      if (!s.result.evidence.empty()) {
        e["evidence"] = s.result.evidence;
      }
      e["source"] = s.source;
      j["spectra"].push_back(std::move(e));
    }
    j["bounds"] = J::array();
    for (auto const& b : r.bounds) {
      J e;
      e["name"]     = b.name;
      e["params"]   = J::object();
      for (auto const& [k, v] : b.params) {
        e["params"][k] = v;
      }
      e["target"]   = b.target;
      e["relation"] = b.relation;
      e["claimed"]  = measure_json(b.claimed);
      e["measured"] = measure_json(b.measured);
      e["status"]   = to_string(b.status);
      if (!b.note.empty()) {
        e["note"] = b.note;
      }
      j["bounds"].push_back(std::move(e));
    }
    j["passed"] = r.passed();
    return j.dump(indent);
  }

  std::string report_text(Report const& r) {
    std::ostringstream os;
    auto opt = [](std::optional<std::size_t> const& v) {
      return v ? std::to_string(*v) : std::string("none");
    };
    os << r.algebra << ": Day k " << opt(r.day_k) << ", Gumm n "
       << opt(r.gumm_n) << ", Jonsson n " << opt(r.jonsson_n) << "\n";
    if (!r.nonmodular.empty()) {
      os << "  not congruence modular: " << r.nonmodular << "\n";
    }
    for (auto const& s : r.spectra) {
      os << "  " << target_name(s.family, s.params) << " = " << s.value.str()
         << " [" << s.source << "]\n";
    }
    for (auto const& b : r.bounds) {
      os << "  " << to_string(b.status) << "  " << b.name;
      for (auto const& [k, v] : b.params) {
        os << " " << k << "=" << v;
      }
      if (!b.target.empty()) {
        os << "  " << b.target << " " << b.measured.str() << " " << b.relation
           << " " << b.claimed.str();
      }
      if (!b.note.empty()) {
        os << "  (" << b.note << ")";
      }
      os << "\n";
    }
    os << "  " << r.count(BoundStatus::Pass) << " pass, "
       << r.count(BoundStatus::Fail) << " fail, "
       << r.count(BoundStatus::Unchecked) << " unchecked, "
       << r.count(BoundStatus::NotApplicable) << " n/a\n";
    return os.str();
  }

}  // namespace cmod
