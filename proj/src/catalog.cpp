#include "cmod/catalog.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cmod {

  namespace {
    using Args = std::vector<std::size_t>;

    struct Family {
      CatalogEntry                          entry;
      std::function<std::string(Args const&)> text;
    };

    [[noreturn]] void bad(std::string const& msg) {
      throw std::invalid_argument(msg);
    }

    void at_least(char const* what, std::size_t v, std::size_t lo) {
      if (v < lo) {
        bad(std::string(what) + " must be at least " + std::to_string(lo));
      }
    }

    std::size_t pow2(std::size_t e) {
      if (e >= 40) {
        bad("exponent too large");
      }
      return std::size_t(1) << e;
    }

    // x o y o x ... with m factors
    std::string chain(std::string const& x, std::string const& y,
                      std::size_t m) {
      std::string out;
      for (std::size_t i = 0; i < m; ++i) {
        if (i) {
          out += " o ";
        }
        out += i % 2 == 0 ? x : y;
      }
      return out;
    }

    std::string const kABG = "cong a b g; ";

    std::string day(std::size_t m, bool rev) {
      at_least("m", m, 1);
      return kABG + "a & (" + chain("b", "(a & g)", m) + ") <= "
             + (rev ? "alt(a & g, a & b, k)" : "alt(a & b, a & g, k)");
    }

    std::string bgb(std::size_t m) {
      return "a & (" + chain("b", "g", m) + ")";
    }

    std::string nest(std::size_t l, bool swap) {
      std::string x = swap ? "g" : "b";
      std::string y = swap ? "b" : "g";
      if (l == 1) {
        return "a & (" + x + " o (a & " + y + ") o " + x + ")";
      }
      return "a & (" + x + " o (" + nest(l - 1, !swap) + ") o " + x + ")";
    }

    std::vector<std::string> names(char const* stem, std::size_t m) {
      std::vector<std::string> out;
      for (std::size_t i = 1; i <= m; ++i) {
        out.push_back(stem + std::to_string(i));
      }
      return out;
    }

    std::string join(std::vector<std::string> const& xs,
                     std::string const&              sep) {
      std::string out;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i ? sep : "") + xs[i];
      }
      return out;
    }

    // right side shared by the Gumm-term inclusions
    std::string gumm_rhs(std::vector<std::string> const& ts,
                         std::string const&              closure) {
      std::vector<std::string> fwd, back;
      for (auto const& t : ts) {
        fwd.push_back("(a & " + t + ")");
      }
      for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        back.push_back("(a & conv(" + *it + "))");
      }
      return "(a & gen_adm(" + closure + ")) o alt(" + join(fwd, " o ") + ", "
             + join(back, " o ") + ", k)";
    }

    std::vector<Family> const& families() {
      static std::vector<Family> const all = [] {
        std::vector<Family> f;
        f.push_back({{"DAY", "a(b o_m ag) <= ab o_k ag", {"m"}, {3}},
                     [](Args const& p) { return day(p[0], false); }});
        f.push_back({{"DAY_REV", "a(b o_m ag) <= ag o_k ab", {"m"}, {3}},
                     [](Args const& p) { return day(p[0], true); }});
        f.push_back({{"DSTAR", "nested brackets, l levels", {"l"}, {2}},
                     [](Args const& p) {
                       at_least("l", p[0], 1);
                       return kABG + nest(p[0], false)
                              + " <= alt(a & b, a & g, k)";
                     }});
        f.push_back({{"TSCHANTZ", "a(b o_m g) <= a(g o b) o (ag o_k ab)",
                      {"m"}, {2}},
                     [](Args const& p) {
                       at_least("m", p[0], 2);
                       return kABG + bgb(p[0])
                              + " <= (a & (g o b)) o alt(a & g, a & b, k)";
                     }});
        f.push_back({{"TSCHANTZ_REV", "a(b o_m g) <= a(b o g) o (ab o_k ag)",
                      {"m"}, {3}},
                     [](Args const& p) {
                       at_least("m", p[0], 2);
                       return kABG + bgb(p[0])
                              + " <= (a & (b o g)) o alt(a & b, a & g, k)";
                     }});
        f.push_back({{"TSTAR", "a(b o_m g) <= a(g o b o g) o (ab o_k ag)",
                      {"m"}, {3}},
                     [](Args const& p) {
                       at_least("m", p[0], 2);
                       return kABG + bgb(p[0])
                              + " <= (a & (g o b o g)) o alt(a & b, a & g, k)";
                     }});
        f.push_back({{"TSTARSTAR", "a(b o_m g) <= a(g o b o g) o_k ...",
                      {"m"}, {3}},
                     [](Args const& p) {
                       at_least("m", p[0], 2);
                       return kABG + bgb(p[0])
                              + " <= pow(a & (g o b o g), k)";
                     }});
        f.push_back(
            {{"TTRIPLE", "a(b o_m g) <= (ab o_h ag) o a(g o b) o (ag o_k ab)",
              {"m", "h"}, {3, 1}},
             [](Args const& p) {
               at_least("m", p[0], 2);
               return kABG + bgb(p[0]) + " <= alt(a & b, a & g, "
                      + std::to_string(p[1])
                      + ") o (a & (g o b)) o alt(a & g, a & b, k)";
             }});
        f.push_back({{"TR_REL", "a(R o_m S) <= a(S o R) o (aS o_k aR)",
                      {"m"}, {2}, 0, false},
                     [](Args const& p) {
                       at_least("m", p[0], 2);
                       return "cong a; adm R S; a & alt(R, S, "
                              + std::to_string(p[0])
                              + ") <= (a & (S o R)) o alt(a & S, a & R, k)";
                     }});
        f.push_back({{"TR_REL_REV", "a(R o_m S) <= a(R o S) o (aR o_k aS)",
                      {"m"}, {3}, 0, false},
                     [](Args const& p) {
                       at_least("m", p[0], 2);
                       return "cong a; adm R S; a & alt(R, S, "
                              + std::to_string(p[0])
                              + ") <= (a & (R o S)) o alt(a & R, a & S, k)";
                     }});
        f.push_back({{"RMOD", "a(R o_m R) <= aR o_k aR", {"m"}, {2}, 0, false},
                     [](Args const& p) {
                       at_least("m", p[0], 1);
                       return "cong a; adm R; a & pow(R, "
                              + std::to_string(p[0]) + ") <= pow(a & R, k)";
                     }});
        f.push_back({{"RRMOD", "a(R o_m aS) <= aR o_k aS", {"m"}, {3}, 0,
                      false},
                     [](Args const& p) {
                       at_least("m", p[0], 1);
                       return "cong a; adm R S; a & alt(R, a & S, "
                              + std::to_string(p[0])
                              + ") <= alt(a & R, a & S, k)";
                     }});
        f.push_back({{"TOLC", "T^h & P^j <= (T & P)^k", {"h", "j"}, {2, 2}, 0,
                      false},
                     [](Args const& p) {
                       at_least("h", p[0], 1);
                       at_least("j", p[1], 1);
                       return "tol T P; pow(T, " + std::to_string(p[0])
                              + ") & pow(P, " + std::to_string(p[1])
                              + ") <= pow(T & P, k)";
                     }});
        f.push_back(
            {{"ED", "a(D o ag o b) <= (aD o aD) o_k ag, D a tolerance over b",
              {}, {}, 0, false},
             [](Args const&) {
               return kABG
                      + "tol D; a & (gen_tol(D, b) o (a & g) o b) <= "
                        "alt((a & gen_tol(D, b)) o (a & gen_tol(D, b)), "
                        "a & g, k)";
             }});
        f.push_back({{"EDDD", "a(D o ag o D) <= aD o (ag o_{k-1} (aD o aD))",
                      {}, {}, 1, false},
                     [](Args const&) {
                       return std::string(
                           "cong a g; tol D; a & (D o (a & g) o D) <= "
                           "(a & D) o alt(a & g, (a & D) o (a & D), k-1)");
                     }});
        f.push_back(
            {{"NTE", "a(D o ag o D) <= aD o_k ag with D = R o conv(R)", {},
              {}, 0, false},
             [](Args const&) {
               return std::string(
                   "cong a g; adm R; a & (R o conv(R) o (a & g) o R o conv(R)) "
                   "<= alt(a & (R o conv(R)), a & g, k)");
             }});
        f.push_back({{"AGA", "a(R o S) <= a(adm closure) o alternation", {},
                      {}, 0, false},
                     [](Args const&) {
                       return "cong a; adm R S; a & (R o S) <= "
                              + gumm_rhs({"R", "S"}, "conv(R), S");
                     }});
        f.push_back(
            {{"AG", "a(T1 o ... o Tm) <= a(adm closure) o alternation", {"m"},
              {3}, 0, false},
             [](Args const& p) {
               at_least("m", p[0], 2);
               auto ts = names("T", p[0]);
               std::vector<std::string> rest(ts.begin() + 1, ts.end());
               return "cong a; adm " + join(ts, " ") + "; a & ("
                      + join(ts, " o ") + ") <= "
                      + gumm_rhs(ts, "conv(T1), " + join(rest, " o "));
             }});
        f.push_back({{"AGAI", "aT o a(R o S) <= a(adm closure) o alternation",
                      {}, {}, 0, false},
                     [](Args const&) {
                       return "cong a; adm T R S; (a & T) o (a & (R o S)) <= "
                              + gumm_rhs({"R", "S"}, "T, conv(R), S");
                     }});
        f.push_back(
            {{"AGI", "aT o a(T1 o ... o Tm) <= a(adm closure) o alternation",
              {"m"}, {2}, 0, false},
             [](Args const& p) {
               at_least("m", p[0], 2);
               auto ts = names("T", p[0]);
               std::vector<std::string> rest(ts.begin() + 1, ts.end());
               return "cong a; adm T " + join(ts, " ") + "; (a & T) o (a & ("
                      + join(ts, " o ") + ")) <= "
                      + gumm_rhs(ts, "T, conv(T1), " + join(rest, " o "));
             }});
        f.push_back(
            {{"BBB",
              "a(b o g o b o g o b) <= (ab o_{4n-1} ag) o a(g o b) o (ag o_k ab)",
              {"n"}, {1}},
             [](Args const& p) {
               at_least("n", p[0], 1);
               return kABG + bgb(5) + " <= alt(a & b, a & g, "
                      + std::to_string(4 * p[0] - 1)
                      + ") o (a & (g o b)) o alt(a & g, a & b, k)";
             }});
        f.push_back({{"Q2", "a(b o g ... 2^q r+1 ... b) <= a(g o b) o (ag o_k ab)",
                      {"r", "q"}, {1, 1}},
                     [](Args const& p) {
                       at_least("r", p[0], 1);
                       at_least("q", p[1], 1);
                       return kABG + bgb(pow2(p[1]) * p[0] + 1)
                              + " <= (a & (g o b)) o alt(a & g, a & b, k)";
                     }});
        f.push_back(
            {{"AGT", "a(b o g ... m+1 ... b) <= a(half chain) o (ag o_k ab)",
              {"m"}, {2}},
             [](Args const& p) {
               std::size_t m = p[0];
               if (m < 2 || m % 2 != 0) {
                 bad("m must be even and at least 2");
               }
               std::size_t h = m / 4;
               std::string mid = m % 4 == 2 ? "a & (" + chain("g", "b", 2 * h + 2)
                                                  + ")"
                                            : bgb(2 * h + 1);
               return kABG + bgb(m + 1) + " <= (" + mid
                      + ") o alt(a & g, a & b, k)";
             }});
        f.push_back(
            {{"AGT_CONV", "a(b o g ... m+1 ... b) <= (ab o_k ag) o a(half chain)",
              {"m"}, {2}},
             [](Args const& p) {
               std::size_t m = p[0];
               if (m < 2 || m % 4 != 2) {
                 bad("m must be 2 modulo 4");
               }
               std::size_t h = m / 4;
               return kABG + bgb(m + 1) + " <= alt(a & b, a & g, k) o ("
                      + bgb(2 * h + 2) + ")";
             }});
        f.push_back({{"QDIST", "a(b o g ... 2^q+1 ... b) <= a(g o b) o (ag o_k ab)",
                      {"q"}, {1}},
                     [](Args const& p) {
                       at_least("q", p[0], 1);
                       return kABG + bgb(pow2(p[0]) + 1)
                              + " <= (a & (g o b)) o alt(a & g, a & b, k)";
                     }});
        f.push_back(
            {{"QDISTCONV", "a(b o g ... 2^q+1 ... b) <= (ab o_k ag) o a(b o g)",
              {"q"}, {1}},
             [](Args const& p) {
               at_least("q", p[0], 1);
               return kABG + bgb(pow2(p[0]) + 1)
                      + " <= alt(a & b, a & g, k) o (a & (b o g))";
             }});
        f.push_back({{"QMOD", "a(b o ag ... 2^p(h+1)-1 ... b) <= ab o_k ag",
                      {"h", "p"}, {1, 2}},
                     [](Args const& p) {
                       at_least("p", p[1], 1);
                       return day(pow2(p[1]) * (p[0] + 1) - 1, false);
                     }});
        return f;
      }();
      return all;
    }

    Family const& family(std::string_view name) {
      for (auto const& f : families()) {
        if (f.entry.name == name) {
          return f;
        }
      }
      bad("unknown identity family '" + std::string(name) + "'");
    }
  }  // namespace

  std::vector<CatalogEntry> const& catalog() {
    static std::vector<CatalogEntry> const out = [] {
      std::vector<CatalogEntry> v;
      for (auto const& f : families()) {
        v.push_back(f.entry);
      }
      return v;
    }();
    return out;
  }

  CatalogEntry const& catalog_entry(std::string_view name) {
    return family(name).entry;
  }

  std::string catalog_text(std::string_view                name,
                           std::vector<std::size_t> const& params) {
    Family const& f = family(name);
    if (params.size() > f.entry.params.size()) {
      bad(f.entry.name + " takes " + std::to_string(f.entry.params.size())
          + " parameter(s)");
    }
    Args p = params;
    for (std::size_t i = p.size(); i < f.entry.defaults.size(); ++i) {
      p.push_back(f.entry.defaults[i]);
    }
    return f.text(p);
  }

  Identity catalog_identity(std::string_view                name,
                            std::vector<std::size_t> const& params) {
    Identity id = parse_identity(catalog_text(name, params));
    id.name     = std::string(name);
    if (name == "ED") {
      id.side_conditions.push_back("D contains b");
    } else if (name == "NTE") {
      id.side_conditions.push_back("D = R o conv(R)");
    }
    return id;
  }

}  // namespace cmod
