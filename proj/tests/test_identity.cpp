#include "doctest.h"

#include <random>

#include "cmod/catalog.hpp"
#include "cmod/error.hpp"
#include "cmod/free_algebra.hpp"
#include "cmod/identity_engine.hpp"
#include "cmod/rel_expr.hpp"
#include "cmod/term_chain.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace cmod;
using namespace cmod::test;

namespace {
  oracle::Rel to_oracle(BinRel const& r) {
    oracle::Rel out;
    for (auto [x, y] : r.pairs()) {
      out.emplace(x, y);
    }
    return out;
  }

  BinRel from_oracle(std::size_t n, oracle::Rel const& r) {
    PairSet ps;
    for (auto [x, y] : r) {
      ps.emplace_back(x, y);
    }
    return BinRel::from_pairs(n, ps);
  }

  std::size_t parse_error_column(std::string const& text) {
    try {
      parse_identity(text);
    } catch (ParseError const& e) {
      return e.column();
    }
    return 0;
  }

  std::string parse_error(std::string const& text) {
    try {
      parse_identity(text);
    } catch (ParseError const& e) {
      return e.what();
    }
    return "";
  }

  // Random expression over variables R, S (adm) built from every operator.
  ExprPtr random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    switch (pick(rng)) {
      case 0: return expr::var("R", VarKind::Adm);
      case 1: return expr::var("S", VarKind::Adm);
      case 2:
        return expr::compose(
            {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
      case 3:
        return expr::meet(
            {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
      case 4: return expr::conv(random_expr(rng, depth - 1));
      case 5:
        return expr::alt(random_expr(rng, depth - 1),
                         random_expr(rng, depth - 1),
                         Count{std::size_t(rng() % 4), {}, 0});
      case 6:
        return expr::pow(random_expr(rng, depth - 1),
                         Count{std::size_t(rng() % 3), {}, 0});
      default:
        return expr::alt(random_expr(rng, depth - 1),
                         random_expr(rng, depth - 1), Count{0, "k", 0});
    }
  }

  oracle::Rel oracle_eval(RelExpr const& e, std::map<std::string, oracle::Rel>
                          const& env, unsigned n, std::size_t k) {
    using Op = RelExpr::Op;
    auto count = [&](Count const& c) {
      return c.symbolic() ? k - c.offset : c.value;
    };
    switch (e.op) {
      case Op::Var: return env.at(e.name);
      case Op::Compose: {
        auto r = oracle_eval(*e.args[0], env, n, k);
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          r = oracle::compose(r, oracle_eval(*e.args[i], env, n, k));
        }
        return r;
      }
      case Op::Meet: {
        auto r = oracle_eval(*e.args[0], env, n, k);
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          r = oracle::meet(r, oracle_eval(*e.args[i], env, n, k));
        }
        return r;
      }
      case Op::Converse:
        return oracle::converse(oracle_eval(*e.args[0], env, n, k));
      case Op::Alt: {
        auto m = count(e.count);
        if (m == 0) {
          return oracle::diagonal(n);
        }
        return oracle::alt(oracle_eval(*e.args[0], env, n, k),
                           oracle_eval(*e.args[1], env, n, k),
                           static_cast<unsigned>(m));
      }
      case Op::Power: {
        auto h = count(e.count);
        auto r = oracle::diagonal(n);
        auto x = oracle_eval(*e.args[0], env, n, k);
        for (std::size_t i = 0; i < h; ++i) {
          r = oracle::compose(r, x);
        }
        return r;
      }
      case Op::Gen: break;
    }
    throw std::logic_error("unsupported");
  }

  std::vector<BinRel> admissible_by_oracle(FiniteAlgebra const& a) {
    unsigned const      n = static_cast<unsigned>(a.size());
    std::vector<BinRel> out;
    std::vector<std::pair<unsigned, unsigned>> off;
    for (unsigned x = 0; x < n; ++x) {
      for (unsigned y = 0; y < n; ++y) {
        if (x != y) {
          off.emplace_back(x, y);
        }
      }
    }
    for (unsigned mask = 0; mask < (1U << off.size()); ++mask) {
      oracle::Rel r = oracle::diagonal(n);
      for (std::size_t i = 0; i < off.size(); ++i) {
        if ((mask >> i) & 1U) {
          r.insert(off[i]);
        }
      }
      if (oracle::preserved(a, r)) {
        out.push_back(from_oracle(n, r));
      }
    }
    return out;
  }

  bool day_in_free(FreeAlgebra const& f, std::size_t k) {
    auto F     = f.as_algebra();
    auto g     = [&](std::size_t i) { return f.generator(i); };
    auto alpha = generate(F, {{g(0), g(3)}, {g(1), g(2)}},
                          RelKind::Congruence);
    auto beta  = generate(F, {{g(0), g(1)}, {g(2), g(3)}},
                          RelKind::Congruence);
    auto gamma = generate(F, {{g(1), g(2)}}, RelKind::Congruence);
    if (k == 0) {
      return g(0) == g(3);
    }
    return alt(meet(alpha, beta), meet(alpha, gamma), k).contains(g(0), g(3));
  }
}  // namespace

TEST_CASE("dsl: spec examples parse") {
  auto day = parse_identity(
      "cong a b g; a & (b o (a & g) o b) <= alt(a&b, a&g, k)");
  CHECK(day.vars.size() == 3);
  CHECK(day.lhs->op == RelExpr::Op::Meet);
  CHECK(day.rhs->op == RelExpr::Op::Alt);
  CHECK(day.rhs->count.symbol == "k");
  CHECK(day.symbols() == std::vector<std::string>{"k"});
  CHECK(to_string(day)
        == "cong a b g; a & (b o (a & g) o b) <= alt(a & b, a & g, k)");

  auto aga = catalog_identity("AGA");
  CHECK(aga.kind_of("R") == VarKind::Adm);
  CHECK(aga.rhs->op == RelExpr::Op::Compose);
  CHECK(aga.rhs->args[0]->args[1]->op == RelExpr::Op::Gen);

  auto tolc = parse_identity("tol T P; pow(T,h) & pow(P,k) <= pow(T & P, l)");
  CHECK(tolc.symbols() == std::vector<std::string>{"h", "k", "l"});
  CHECK(tolc.lhs->op == RelExpr::Op::Meet);
  CHECK(tolc.lhs->args[0]->op == RelExpr::Op::Power);
}

TEST_CASE("dsl: precedence and flattening") {
  auto id = parse_identity("cong a b g; a o b & g o a <= (a o b) o (g o a)");
  REQUIRE(id.lhs->op == RelExpr::Op::Compose);
  CHECK(id.lhs->args.size() == 3);
  CHECK(id.lhs->args[1]->op == RelExpr::Op::Meet);
  REQUIRE(id.rhs->op == RelExpr::Op::Compose);
  CHECK(id.rhs->args.size() == 4);
  auto m = parse_identity("cong a b g; a & (b & g) <= a");
  CHECK(m.lhs->args.size() == 3);
  auto c = parse_identity("cong a; a <= alt(a, a, k-2)");
  CHECK(c.rhs->count == Count{0, "k", 2});
  CHECK(to_string(c) == "cong a; a <= alt(a, a, k-2)");
}

TEST_CASE("dsl: errors") {
  CHECK(parse_error("cong a; a & b <= a").find("undeclared variable 'b'")
        != std::string::npos);
  CHECK(parse_error_column("cong a; a & b <= a") == 13);
  CHECK(parse_error("cong a; a <= alt(a, a)").find("malformed alt count")
        != std::string::npos);
  CHECK(parse_error("cong a; a <= alt(a, a, x y)").find("malformed")
        != std::string::npos);
  CHECK(parse_error("cong a; a <= pow(a, -1)").find("malformed")
        != std::string::npos);
  CHECK(parse_error("cong a; a <= alt(a, a, 99999999999999999999999)")
            .find("malformed")
        != std::string::npos);
  CHECK(parse_error("cong a; a a").find("expected '<='") != std::string::npos);
  CHECK(parse_error("cong a; a <= (a").find("expected ')'")
        != std::string::npos);
  CHECK(parse_error("cong a a; a <= a").find("declared twice")
        != std::string::npos);
  CHECK(parse_error("cong o; o <= o").find("reserved") != std::string::npos);
  CHECK(parse_error("cong a; a <= a $").find("unexpected character")
        != std::string::npos);
  CHECK(parse_error("cong a;\n a <= b").find("line 2, column 7")
        != std::string::npos);
}

TEST_CASE("catalog: every family round-trips") {
  CHECK(catalog().size() >= 27);
  for (auto const& e : catalog()) {
    CAPTURE(e.name);
    for (std::size_t bump = 0; bump < 3; ++bump) {
      std::vector<std::size_t> params = e.defaults;
      if (!params.empty()) {
        params[0] += 2 * bump;
      }
      if (e.name == "AGT_CONV") {
        params[0] = 2 + 4 * bump;
      }
      Identity a = catalog_identity(e.name, params);
      Identity b = parse_identity(to_string(a));
      Identity c = parse_identity(to_string(b));
      CHECK(same_statement(a, b));
      CHECK(same_statement(b, c));
      CHECK(to_string(a) == to_string(b));
      std::string why;
      CHECK(pw_checkable(a, &why) == e.congruence_only);
    }
  }
  CHECK_THROWS_AS(catalog_identity("NOPE"), std::invalid_argument);
  CHECK_THROWS_AS(catalog_identity("AGT_CONV", {4}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_identity("DAY", {3, 4}), std::invalid_argument);
  CHECK(same_statement(catalog_identity("DSTAR", {1}),
                       catalog_identity("DAY", {3})));
  CHECK(same_statement(catalog_identity("QMOD", {1, 2}),
                       catalog_identity("DAY", {7})));
  CHECK(same_statement(catalog_identity("QDIST", {2}),
                       catalog_identity("TSCHANTZ", {5})));
  CHECK(to_string(*catalog_identity("DSTAR", {2}).lhs)
        == "a & (b o (a & (g o (a & b) o g)) o b)");
  CHECK(to_string(*catalog_identity("DSTAR", {3}).lhs)
        == "a & (b o (a & (g o (a & (b o (a & g) o b)) o g)) o b)");
}

TEST_CASE("eval: trivial cases") {
  auto  a   = load("chain3");
  auto  cg  = all_congruences(a);
  Env   env{{"a", cg.back()}, {"b", cg.front()}};
  auto  id  = parse_identity("cong a b; a <= alt(a, b, 0)");
  CHECK(eval_expr(a, *id.lhs, env) == cg.back());
  CHECK(eval_expr(a, *id.rhs, env) == BinRel::identity(3));
  auto p = parse_identity("cong a b; pow(a, 0) <= pow(a, k)");
  CHECK(eval_expr(a, *p.lhs, env).is_identity());
  CHECK(eval_expr(a, *p.rhs, env, {{"k", 2}}) == cg.back());
  CHECK_THROWS_AS(eval_expr(a, *p.rhs, env), std::out_of_range);
  auto q = parse_identity("cong a; a <= alt(a, a, k-3)");
  CHECK_THROWS_AS(eval_expr(a, *q.rhs, {{"a", cg.back()}}, {{"k", 2}}),
                  std::domain_error);
}

TEST_CASE("eval: kind violations") {
  auto a   = load("chain3");
  auto tol = parse_identity("tol T; T <= T");
  // transitive and compatible but not symmetric
  BinRel up = BinRel::from_pairs(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK_THROWS_AS(eval_expr(a, *tol.lhs, {{"T", up}}), std::invalid_argument);
  auto adm = parse_identity("adm R; R <= R");
  CHECK(eval_expr(a, *adm.lhs, {{"R", up}}) == up);
  BinRel bad = BinRel::from_pairs(3, {{0, 2}});
  CHECK_THROWS_AS(eval_expr(a, *adm.lhs, {{"R", bad}}), std::invalid_argument);
  auto cg = parse_identity("cong a; a <= a");
  BinRel sym = BinRel::from_pairs(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
  CHECK_THROWS_AS(eval_expr(a, *cg.lhs, {{"a", sym}}), std::invalid_argument);
  CHECK_THROWS_AS(eval_expr(a, *cg.lhs, {}), std::invalid_argument);
}

TEST_CASE("eval: closure is the least admissible superset") {
  auto a    = load("chain3");
  auto adms = admissible_by_oracle(a);
  auto id   = parse_identity("adm R S; gen_adm(conv(R), S) <= R");
  auto tid  = parse_identity("adm R S; gen_tol(R, S) <= R");
  auto cid  = parse_identity("adm R S; gen_cong(R, S) <= R");
  std::size_t checked = 0;
  for (auto const& r : adms) {
    for (auto const& s : adms) {
      Env    env{{"R", r}, {"S", s}};
      BinRel got = eval_expr(a, *id.lhs, env);
      BinRel seed = rel_union(converse(r), s);
      std::optional<BinRel> least;
      for (auto const& t : adms) {
        if (seed.subset_of(t)) {
          least = least ? meet(*least, t) : t;
        }
      }
      REQUIRE(least);
      CHECK(got == *least);
      CHECK(std::find(adms.begin(), adms.end(), got) != adms.end());
      auto u = rel_union(r, s);
      CHECK(to_oracle(eval_expr(a, *tid.lhs, env))
            == oracle::closure(a, to_oracle(u), true, false));
      CHECK(to_oracle(eval_expr(a, *cid.lhs, env))
            == oracle::closure(a, to_oracle(u), true, true));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("eval: random expressions agree with the set oracle") {
  std::mt19937 rng(7);
  auto         a    = load("chain3");
  auto         adms = admissible_by_oracle(a);
  for (int trial = 0; trial < 300; ++trial) {
    auto   e = random_expr(rng, 4);
    BinRel r = adms[rng() % adms.size()];
    BinRel s = adms[rng() % adms.size()];
    Env    env{{"R", r}, {"S", s}};
    std::map<std::string, oracle::Rel> oenv{{"R", to_oracle(r)},
                                            {"S", to_oracle(s)}};
    std::size_t k = rng() % 5;
    CAPTURE(to_string(*e));
    auto want = oracle_eval(*e, oenv, 3, k);
    CHECK(to_oracle(eval_expr(a, *e, env, {{"k", k}})) == want);
    Evaluator ev(&a, 3, env);
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t y = 0; y < 3; ++y) {
        CHECK(ev.contains(*e, x, y, {{"k", k}}) == want.contains({x, y}));
      }
    }
  }
}

TEST_CASE("evaluator: image propagation matches materialized rows") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto a  = random_algebra(rng, 4, {2});
    auto rs = relation_family(a, VarKind::Adm);
    REQUIRE(!rs.empty());
    Env env{{"R", rs[rng() % rs.size()]}, {"S", rs[rng() % rs.size()]}};
    Evaluator ev(&a, 4, env);
    for (int j = 0; j < 5; ++j) {
      auto   e = random_expr(rng, 3);
      BinRel m = ev.eval(*e, {{"k", 3}});
      for (std::size_t x = 0; x < 4; ++x) {
        CHECK(ev.image(*e, singleton(4, x), {{"k", 3}}).elements()
              == image(m, singleton(4, x)).elements());
      }
    }
  }
}

TEST_CASE("relation families") {
  auto a = load("chain3");
  auto adm = relation_family(a, VarKind::Adm);
  CHECK(adm.size() == admissible_by_oracle(a).size());
  auto tol = relation_family(a, VarKind::Tol);
  for (auto const& t : tol) {
    CHECK(t.is_symmetric());
  }
  std::size_t sym = 0;
  for (auto const& r : adm) {
    sym += r.is_symmetric();
  }
  CHECK(tol.size() == sym);
  CHECK(relation_family(a, VarKind::Cong).size() == oracle::congruences(a).size());

  // seeded generation on a larger algebra only yields genuine relations
  EngineOptions small;
  small.enum_size = 2;
  auto seeded     = relation_family(a, VarKind::Adm, small);
  CHECK(seeded.size() <= adm.size());
  for (auto const& r : seeded) {
    CHECK(std::find(adm.begin(), adm.end(), r) != adm.end());
  }
}

TEST_CASE("check_concrete: spec examples") {
  auto day32 = catalog_identity("DAY", {3});
  auto z2    = load("z2");
  auto v     = check_concrete(z2, day32, CheckMode::AllCongTuples, {{"k", 2}});
  CHECK(v.holds);
  CHECK(v.tried == 8);
  CHECK_FALSE(v.variety_level);
  auto l2 = load("lattice2");
  CHECK(check_concrete(l2, day32, CheckMode::AllCongTuples, {{"k", 2}}).holds);
  auto tolc = catalog_identity("TOLC", {1, 1});
  for (auto const& a : corpus()) {
    CHECK(check_concrete(a, tolc, CheckMode::EnumerateRelations, {{"k", 1}})
              .holds);
  }
  CHECK_THROWS_AS(
      check_concrete(z2, tolc, CheckMode::AllCongTuples, {{"k", 1}}),
      std::invalid_argument);
}

TEST_CASE("check_concrete: refutation carries a counterexample") {
  auto c3 = load("chain3");
  auto id = parse_identity("cong a b; a o b <= a & b");
  auto v  = check_concrete(c3, id, CheckMode::AllCongTuples);
  REQUIRE_FALSE(v.holds);
  REQUIRE(v.pair);
  Evaluator ev(&c3, 3, v.counterexample);
  CHECK(ev.eval(*id.lhs).contains(v.pair->first, v.pair->second));
  CHECK_FALSE(ev.eval(*id.rhs).contains(v.pair->first, v.pair->second));
}

TEST_CASE("pw_check: generic configuration of DAY(3)") {
  auto c = generic_configuration(catalog_identity("DAY", {3}));
  CHECK(c.nodes == 4);
  CHECK(c.first == 0);
  CHECK(c.last == 3);
  using E = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(c.edges.at("a") == E{{1, 2}, {0, 3}});
  CHECK(c.edges.at("b") == E{{0, 1}, {2, 3}});
  CHECK(c.edges.at("g") == E{{1, 2}});
  auto d = generic_configuration(catalog_identity("DSTAR", {2}));
  CHECK(d.nodes == 6);
  CHECK_THROWS_AS(generic_configuration(catalog_identity("AGA")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      generic_configuration(parse_identity("cong a b; a & conv(b) <= a")),
      std::invalid_argument);
  CHECK_THROWS_AS(generic_configuration(
                      parse_identity("cong a b; a & (b o a) & (a o b) <= a")),
                  std::invalid_argument);
}

TEST_CASE("pw_check: spec examples") {
  FreeCache cache;
  auto      l2  = load("lattice2");
  auto      day = catalog_identity("DAY", {3});
  for (std::size_t k = 0; k <= 5; ++k) {
    auto v = pw_check(l2, day, {{"k", k}}, cache);
    CHECK(v.variety_level);
    CHECK(v.holds == (k >= 3));
    if (!v.holds) {
      CHECK(v.evidence.find("F(4) with 166 elements") != std::string::npos);
    }
  }
  CHECK(pw_check(load("z2"), day, {{"k", 2}}, cache).holds);
  CHECK_FALSE(pw_check(load("z2"), day, {{"k", 1}}, cache).holds);
  CHECK_FALSE(
      pw_check(load("semilattice2"), day, {{"k", 20}}, cache).holds);
}

TEST_CASE("pw_check: DSTAR(1) and DAY(3) agree on the corpus") {
  FreeCache cache;
  auto      ds = catalog_identity("DSTAR", {1});
  auto      dy = catalog_identity("DAY", {3});
  for (auto const& a : corpus()) {
    for (std::size_t k = 0; k <= 6; ++k) {
      CHECK(pw_check(a, ds, {{"k", k}}, cache).holds
            == pw_check(a, dy, {{"k", k}}, cache).holds);
    }
  }
}

TEST_CASE("pw_check: agrees with Day terms and with a direct construction") {
  FreeCache cache;
  auto      day = catalog_identity("DAY", {3});
  for (auto const& a : corpus()) {
    CAPTURE(a.name());
    auto f4 = cache.get(a, 4, {});
    for (std::size_t k = 0; k <= 6; ++k) {
      bool pw = pw_check(a, day, {{"k", k}}, cache).holds;
      CHECK(pw == day_in_free(*f4, k));
      auto chain = search_day(*f4, k);
      if (k >= 1) {
        CHECK(pw == chain.has_value());
      }
    }
  }
}

TEST_CASE("pw_check: concrete checks never refute a variety-valid inclusion") {
  FreeCache cache;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> fams{
      {"DAY", {3}},      {"DAY_REV", {3}}, {"DAY", {4}},  {"TSCHANTZ", {2}},
      {"TSCHANTZ", {3}}, {"TSTAR", {3}},   {"TSTARSTAR", {3}}, {"BBB", {1}},
      {"DSTAR", {2}}};
  for (auto const& a : corpus()) {
    for (auto const& [name, params] : fams) {
      auto id = catalog_identity(name, params);
      for (std::size_t k = 0; k <= 4; ++k) {
        Verdict pw;
        try {
          pw = pw_check(a, id, {{"k", k}}, cache);
        } catch (CapExceeded const&) {
          continue;
        }
        if (pw.holds) {
          CAPTURE(a.name());
          CAPTURE(name);
          CHECK(check_concrete(a, id, CheckMode::AllCongTuples, {{"k", k}})
                    .holds);
        }
      }
    }
  }
}

TEST_CASE("spectrum: spec examples") {
  FreeCache cache;
  auto      z2 = load("z2");
  for (std::size_t m = 3; m <= 7; ++m) {
    auto r = spectrum(z2, "DAY", {m}, cache);
    CHECK(r.status == SpectrumStatus::Found);
    CHECK(r.value == 2u);
    CHECK_FALSE(r.algebra_level);
  }
  auto l2 = load("lattice2");
  CHECK(spectrum(l2, "DAY", {3}, cache).value == 3u);
  CHECK(spectrum(l2, "DAY", {4}, cache).value == 4u);
  CHECK(spectrum(l2, "TSCHANTZ", {2}, cache).value == 1u);
  CHECK(spectrum(l2, "DAY_REV", {3}, cache).value == 4u);
  auto tr = spectrum(l2, "DAY", {3}, cache);
  CHECK(tr.evidence.find("fails at k=2") != std::string::npos);
  CHECK(spectrum(load("trivial"), "DAY", {3}, cache).value == 0u);
}

TEST_CASE("spectrum: caps and algebra-level families") {
  FreeCache     cache;
  EngineOptions opts;
  opts.spectrum_cap = 5;
  auto s = spectrum(load("semilattice2"), "DAY", {3}, cache, opts);
  CHECK(s.status == SpectrumStatus::ExceedsCap);
  CHECK_FALSE(s.value);

  EngineOptions tiny;
  tiny.free.cap_entries = 100;
  auto u = spectrum(load("lattice2"), "DAY", {3}, cache, tiny);
  CHECK(u.status == SpectrumStatus::Unchecked);

  auto r = spectrum(load("lattice2"), "RMOD", {2}, cache);
  CHECK(r.algebra_level);
  CHECK(r.status == SpectrumStatus::Found);
  auto t = spectrum(load("z2"), "TOLC", {1, 1}, cache);
  CHECK(t.value == 1u);
  auto e = spectrum(load("z2"), "EDDD", {}, cache);
  CHECK(e.value >= 1u);
}
