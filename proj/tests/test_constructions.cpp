#include <doctest.h>

#include <random>

#include "cmod/catalog.hpp"
#include "cmod/constructions.hpp"
#include "cmod/error.hpp"
#include "corpus.hpp"
#include "suites.hpp"

using namespace cmod;
using namespace cmod::test;


TEST_CASE("jonsson_to_day follows the table") {
  TermChain j{Scheme::Jonsson, 2, {}};
  for (int i = 0; i < 4; ++i) {
    j.terms.push_back(Term::app("j" + std::to_string(i),
                                {Term::var(0), Term::var(1), Term::var(2)}));
  }
  auto d = jonsson_to_day(j);
  CHECK(d.scheme == Scheme::Day);
  CHECK(d.n == 4);
  REQUIRE(d.terms.size() == 5);
  CHECK(to_prefix(d.terms[0]) == "(j0 x0 x1 x3)");
  CHECK(to_prefix(d.terms[1]) == "(j1 x0 x1 x3)");
  CHECK(to_prefix(d.terms[2]) == "(j1 x0 x2 x3)");
  CHECK(to_prefix(d.terms[3]) == "(j2 x1 x2 x3)");
  CHECK(to_prefix(d.terms[4]) == "x3");

  for (int i = 4; i < 6; ++i) {
    j.terms.push_back(Term::app("j" + std::to_string(i),
                                {Term::var(0), Term::var(1), Term::var(2)}));
  }
  j.n = 4;
  d   = jonsson_to_day(j);
  REQUIRE(d.terms.size() == 9);
  CHECK(to_prefix(d.terms[4]) == "(j2 x0 x1 x3)");
  CHECK(to_prefix(d.terms[6]) == "(j3 x0 x2 x3)");
  CHECK(to_prefix(d.terms[7]) == "(j4 x1 x2 x3)");

  j.n = 3;
  j.terms.pop_back();
  CHECK_THROWS_AS(jonsson_to_day(j), std::invalid_argument);
  CHECK_THROWS_AS(jonsson_to_day(TermChain{Scheme::Day, 2, {}}),
                  std::invalid_argument);
}

TEST_CASE("jonsson_to_day on corpus chains") {
  auto l  = load("lattice2");
  auto lj = search_jonsson(l, 10, false);
  REQUIRE(lj);
  CHECK(lj->n == 1);
  CHECK_THROWS_AS(jonsson_to_day(l, *lj), std::invalid_argument);
  auto even = jonsson_even(*lj);
  CHECK(even.n == 2);
  auto d = jonsson_to_day(l, even);
  CHECK(d.n == 4);
  CHECK(verify_chain(l, d).valid());
  CHECK(verify_chain(load("chain3"), d).valid());

  // projections only: valid in the trivial algebra
  TermChain proj{Scheme::Jonsson, 2,
                 {Term::var(0), Term::var(0), Term::var(0), Term::var(2)}};
  auto t = load("trivial");
  CHECK(verify_chain(t, proj).valid());
  CHECK(verify_chain(t, jonsson_to_day(t, proj)).valid());
  // unverified input
  CHECK_THROWS_AS(jonsson_to_day(l, proj), std::invalid_argument);
}

TEST_CASE("jonsson_to_day on random algebras") {
  std::mt19937 rng(99);
  int          done = 0;
  for (int trial = 0; trial < 2000 && done < 60; ++trial) {
    auto a = random_algebra(rng, 2 + trial % 2, {3}, true);
    std::optional<TermChain> j;
    try {
      j = search_jonsson(a, 8, false);
    } catch (CapExceeded const&) {
      continue;
    }
    if (!j) {
      continue;
    }
    auto even = jonsson_even(*j);
    CHECK(verify_chain(a, even).valid());
    auto d = jonsson_to_day(a, even);
    CHECK(d.n == 2 * even.n);
    CHECK(verify_chain(a, d).valid());
    ++done;
  }
  CHECK(done >= 50);
}

TEST_CASE("day witness chains on z2") {
  auto       z     = load("z2");
  auto       day   = *search_day(z, 5);
  REQUIRE(day.n == 2);
  auto const congs = all_congruences(z);
  auto const adms  = relation_family(z, VarKind::Adm);
  int        built = 0;
  for (auto const& al : congs) {
    for (auto const& ga : congs) {
      for (auto const& R : adms) {
        for (Element a = 0; a < 2; ++a) {
          for (Element d = 0; d < 2; ++d) {
            auto in = find_day_input(al, ga, R, a, d);
            if (!in) {
              continue;
            }
            auto w = day_witness_chain(z, day, *in, al, ga, R);
            CHECK(w.elements.size() == 3);
            CHECK(w.elements.front() == a);
            CHECK(w.elements.back() == d);
            CHECK(chain_valid(z, w));
            ++built;
          }
        }
      }
    }
  }
  CHECK(built > 0);

  auto l  = load("lattice2");
  auto ld = *search_day(l, 5);
  auto full = BinRel::full(2);
  DayInput same{1, 1, 1, 1, 1, 1};
  auto w = day_witness_chain(l, ld, same, full, full, full);
  for (Element e : w.elements) {
    CHECK(e == 1);
  }
  DayInput bad{0, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(day_witness_chain(l, ld, bad, BinRel::identity(2), full, full),
                  std::invalid_argument);
  CHECK_THROWS_AS(day_witness_chain(l, *search_gumm(l, 5), same, full, full, full),
                  std::invalid_argument);
}

TEST_CASE("day witness chains on random inputs") {
  auto         suite = modular_suite(12);
  std::mt19937 rng(5);
  int          built = 0;
  for (int trial = 0; trial < 20000 && built < 150; ++trial) {
    auto const& m  = suite[trial % suite.size()];
    auto const& al = pick(rng, m.congs);
    auto const& ga = pick(rng, m.congs);
    auto const& R  = pick(rng, m.adms);
    Element     a  = pick_elem(rng, m.alg.size());
    auto        cls = row(al, a);
    Element     d   = pick(rng, cls);
    auto        in  = find_day_input(al, ga, R, a, d);
    if (!in) {
      continue;
    }
    auto w = day_witness_chain(m.alg, m.day, *in, al, ga, R);
    CHECK(w.elements.size() == m.day.n + 1);
    CHECK(w.elements.front() == a);
    CHECK(w.elements.back() == d);
    CHECK(chain_valid(m.alg, w));
    ++built;
  }
  CHECK(built >= 100);
}

TEST_CASE("gumm witness chains: corpus examples") {
  auto z = load("z2");
  auto g = *search_gumm(z, 5);
  REQUIRE(g.n == 0);
  GummInput in;
  in.alpha = BinRel::full(2);
  in.R     = BinRel::full(2);
  in.S     = BinRel::identity(2);
  in.a = 0, in.b = 1, in.c = 1;
  auto w = gumm_witness_chain(z, g, GummVariant::AGA, in);
  CHECK(w.elements == std::vector<Element>{0, 1});
  CHECK(to_string(*w.stepLabels[0]) == "a & gen_adm(conv(R), S)");
  CHECK(chain_valid(z, w));

  auto l  = load("lattice2");
  auto lg = *search_gumm(l, 5);
  REQUIRE(lg.n == 1);
  in.R = in.S = BinRel::full(2);
  in.a = 0, in.b = 1, in.c = 1;
  w = gumm_witness_chain(l, lg, GummVariant::AGA, in);
  CHECK(w.stepLabels.size() == 1 + 2 * lg.n);
  CHECK(chain_valid(l, w));

  // all T_l equal to one congruence: every block step is a & T
  auto      c3    = load("chain3");
  auto      cg    = *search_gumm(c3, 5);
  auto      beta  = all_congruences(c3);
  BinRel    b;
  for (auto const& t : beta) {
    if (!t.is_identity() && !t.is_full()) {
      b = t;
    }
  }
  REQUIRE(b.size() == 3);
  GummInput ag;
  ag.alpha = BinRel::full(3);
  ag.R = ag.S = b;
  ag.Ts       = {b, b};
  auto cls    = row(b, 0);
  REQUIRE(cls.size() == 2);
  ag.a = 0, ag.b = cls[1], ag.c = cls[1];
  ag.path = {0, cls[1], cls[1]};
  w = gumm_witness_chain(c3, cg, GummVariant::AG, ag);
  CHECK(chain_valid(c3, w));
  for (std::size_t i = 1; i < w.stepLabels.size(); ++i) {
    auto s = to_string(*w.stepLabels[i]);
    CHECK((s == "a & T1" || s == "a & T2" || s == "a & conv(T1)"
           || s == "a & conv(T2)"));
  }

  GummInput badpath = ag;
  badpath.path      = {0, 2, cls[1]};
  if (!b.contains(0, 2)) {
    CHECK_THROWS_AS(gumm_witness_chain(c3, cg, GummVariant::AG, badpath),
                    std::invalid_argument);
  }
  CHECK_THROWS_AS(gumm_witness_chain(l, lg, GummVariant::Defective, in),
                  std::invalid_argument);
  auto padded = pad_chain(lg);
  w = gumm_witness_chain(l, padded, GummVariant::Defective, in);
  CHECK(w.stepLabels.size() == 2 * padded.n);
  CHECK(chain_valid(l, w));
}

TEST_CASE("gumm witness chains on random inputs") {
  auto         suite = modular_suite(12);
  std::mt19937 rng(8);
  int          built[5] = {0, 0, 0, 0, 0};
  for (int trial = 0; trial < 40000; ++trial) {
    auto const& m  = suite[trial % suite.size()];
    auto const  v  = static_cast<GummVariant>(trial % 5);
    std::size_t const n = m.alg.size();
    GummInput   in;
    in.alpha = pick(rng, m.congs);
    in.a     = pick_elem(rng, n);
    in.c     = pick(rng, row(in.alpha, in.a));
    if (v == GummVariant::AG || v == GummVariant::AGI) {
      in.Ts = {pick(rng, m.adms), pick(rng, m.adms)};
      auto mid = row(in.Ts[0], in.a);
      Element b1 = pick(rng, mid);
      if (!in.Ts[1].contains(b1, in.c)) {
        continue;
      }
      in.path = {in.a, b1, in.c};
      in.R    = in.Ts[0];
      in.S    = in.Ts[1];
      in.b    = b1;
    } else {
      in.R   = pick(rng, m.adms);
      in.S   = pick(rng, m.adms);
      auto b = find_middle(in.R, in.S, in.a, in.c);
      if (!b) {
        continue;
      }
      in.b = *b;
    }
    if (v == GummVariant::AGAI || v == GummVariant::AGI) {
      in.T        = pick(rng, m.adms);
      auto before = row(converse(meet(in.T, in.alpha)), in.a);
      in.a_prime  = pick(rng, before);
    }
    TermChain chain = m.gumm;
    if (v == GummVariant::Defective && (chain.n % 2 == 1 || chain.n == 0)) {
      chain = pad_chain(chain.n == 0 ? pad_chain(chain) : chain);
    }
    auto w = gumm_witness_chain(m.alg, chain, v, in);
    CHECK(chain_valid(m.alg, w));
    CHECK(w.elements.back() == in.c);
    ++built[trial % 5];
  }
  for (int b : built) {
    CHECK(b >= 100);
  }
}

TEST_CASE("free paths for DAY") {
  auto l   = load("lattice2");
  auto day = *search_day(l, 5);
  for (std::size_t m = 1; m <= 7; ++m) {
    auto p = day_path(l, day, m);
    CHECK(path_defect(l, p).empty());
    CHECK(p.length() == m);
    CHECK(p.length(true) == m + 1);
  }
  auto p = day_path(l, day, 5);
  p.labels[1] = p.labels[1] == 'b' ? 'g' : 'b';
  CHECK_FALSE(path_defect(l, p).empty());
  p = day_path(l, day, 5);
  std::swap(p.elements.front(), p.elements.back());
  CHECK_FALSE(path_defect(l, p).empty());

  auto z  = load("z2");
  auto zd = *search_day(z, 5);
  for (std::size_t m = 3; m <= 7; ++m) {
    auto q = day_path(z, zd, m);
    CHECK(path_defect(z, q).empty());
    CHECK(q.length() == 2);
  }
  CHECK_THROWS_AS(day_path(load("chain3"), *search_day(load("chain3"), 5), 20),
                  CapExceeded);
}

TEST_CASE("certified values agree with the free algebra") {
  FreeCache cache;
  for (auto name : {"z2", "lattice2", "chain3", "trivial"}) {
    auto a   = load(name);
    auto day = *search_day(a, 5);
    for (std::size_t m = 3; m <= 4; ++m) {
      for (bool rev : {false, true}) {
        auto c = certified_day(a, day, m, rev);
        auto s = spectrum(a, rev ? "DAY_REV" : "DAY", {m}, cache);
        REQUIRE(s.value);
        if (c.value) {
          CHECK(*c.value == *s.value);
        } else {
          CHECK(c.status == SpectrumStatus::Unchecked);
        }
      }
    }
  }
  auto l = load("lattice2");
  for (std::size_t m = 3; m <= 7; ++m) {
    auto c = certified_day(l, *search_day(l, 5), m);
    REQUIRE(c.value);
    CHECK(*c.value == m);
    CHECK(c.status == SpectrumStatus::Found);
  }
}

TEST_CASE("projection refutations are refutations") {
  FreeCache    cache;
  std::mt19937 rng(3);
  std::vector<FiniteAlgebra> algs = corpus();
  for (int i = 0; i < 6; ++i) {
    algs.push_back(random_algebra(rng, 2, {2}));
  }
  int refuted = 0;
  for (auto const& a : algs) {
    for (auto fam : {"DAY", "DAY_REV", "TSCHANTZ"}) {
      Identity id = catalog_identity(fam, {3});
      for (std::size_t k = 1; k <= 4; ++k) {
        Params p{{"k", k}};
        auto   v = projection_check(a, id, p, monotone_assignments(a.size(), 4));
        if (!v.holds) {
          ++refuted;
          CHECK(v.variety_level);
          CHECK_FALSE(pw_check(a, id, p, cache).holds);
        } else {
          CHECK_FALSE(v.variety_level);
        }
      }
    }
  }
  CHECK(refuted > 10);
}

TEST_CASE("generated subpowers") {
  auto l = load("lattice2");
  // a 4-element chain inside 2^3
  auto s = generated_subpower(l, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
  CHECK(s.algebra.size() == 4);
  CHECK(s.generators.size() == 4);
  auto b = generated_subpower(l, {{0, 1}, {1, 0}});
  CHECK(b.algebra.size() == 4);
  CHECK(all_congruences(b.algebra).size() == 4);
  CHECK_THROWS_AS(generated_subpower(l, {{0, 1, 0, 1, 0, 1, 0, 1},
                                         {0, 0, 1, 1, 0, 0, 1, 1},
                                         {0, 0, 0, 0, 1, 1, 1, 1}},
                                     10),
                  CapExceeded);
}
