#include "doctest.h"

#include <random>

#include "cmod/error.hpp"
#include "cmod/kernels.hpp"
#include "cmod/relation.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace cmod;

namespace {
  oracle::Rel to_set(BinRel const& r) {
    oracle::Rel out;
    for (auto [a, b] : r.pairs()) {
      out.emplace(a, b);
    }
    return out;
  }

  BinRel random_rel(std::mt19937& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    BinRel                      r(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (coin(rng)) {
          r.insert(a, b);
        }
      }
    }
    return r;
  }
}  // namespace

TEST_CASE("constructors") {
  BinRel id(3);
  CHECK(id.is_identity());
  CHECK(id.count() == 3);
  CHECK(BinRel::full(3).is_full());
  auto r = BinRel::from_pairs(3, {{0, 1}});
  CHECK(r.contains(0, 1));
  CHECK(r.contains(2, 2));
  CHECK_FALSE(r.contains(1, 0));
  CHECK_THROWS_AS(BinRel::from_pairs(3, {{0, 3}}), std::out_of_range);
  auto e = BinRel::from_labels(std::vector<std::uint32_t>{0, 0, 2});
  CHECK(e.contains(1, 0));
  CHECK(e.count() == 5);
  CHECK(BinRel::from_rows({"110", "010", "001"}) == r);
  CHECK_THROWS_AS(BinRel::from_rows({"010", "010", "001"}),
                  std::invalid_argument);
}

TEST_CASE("calculus agrees with set-based oracle") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 9;
    auto        r = random_rel(rng, n, 0.3);
    auto        s = random_rel(rng, n, 0.3);
    auto        R = to_set(r);
    auto        S = to_set(s);
    CHECK(to_set(compose(r, s)) == oracle::compose(R, S));
    CHECK(to_set(meet(r, s)) == oracle::meet(R, S));
    CHECK(to_set(converse(r)) == oracle::converse(R));
    for (unsigned m = 1; m <= 4; ++m) {
      CHECK(to_set(alt(r, s, m)) == oracle::alt(R, S, m));
    }
  }
}

TEST_CASE("size mismatch and degenerate alt") {
  CHECK_THROWS_AS(compose(BinRel(2), BinRel(3)), std::invalid_argument);
  CHECK_THROWS_AS(alt(BinRel(2), BinRel(2), 0), std::invalid_argument);
  CHECK(power(BinRel(2), 3).is_identity());
}

TEST_CASE("image") {
  auto r   = BinRel::from_pairs(4, {{0, 1}, {1, 2}});
  auto img = image(r, singleton(4, 0));
  CHECK(img.elements() == std::vector<Element>{0, 1});
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937 rng(11);
  for (std::size_t n : {5u, 64u, 65u, 130u, 600u}) {
    auto                       r = random_rel(rng, n, 0.02);
    auto                       s = random_rel(rng, n, 0.02);
    std::size_t                w = r.words_per_row();
    std::vector<std::uint64_t> a(n * w), b(n * w);
    kernels::compose_serial(n, w, r.data(), s.data(), a);
    kernels::compose_parallel(n, w, r.data(), s.data(), b);
    CHECK(a == b);
    kernels::transpose_serial(n, w, r.data(), a);
    kernels::transpose_parallel(n, w, r.data(), b);
    CHECK(a == b);
  }
}

TEST_CASE("identity and full relations are congruences") {
  for (auto const& a : test::corpus()) {
    CHECK(is_compatible(a, BinRel(a.size()), RelKind::Congruence));
    CHECK(is_compatible(a, BinRel::full(a.size()), RelKind::Congruence));
  }
}

TEST_CASE("compatibility agrees with oracle") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + trial % 3;
    auto        a = test::random_algebra(rng, n, {2});
    auto        r = random_rel(rng, n, 0.4);
    bool        adm = oracle::preserved(a, to_set(r));
    CHECK(is_compatible(a, r, RelKind::Admissible) == adm);
    CHECK(is_compatible(a, r, RelKind::Tolerance)
          == (adm && r.is_symmetric()));
    CHECK(is_compatible(a, r, RelKind::Congruence)
          == (adm && oracle::is_equivalence(to_set(r), n)));
  }
}

TEST_CASE("with_verified_kind") {
  auto l = test::load("lattice2");
  auto r = with_verified_kind(l, BinRel::full(2), RelKind::Congruence);
  CHECK(r.kind_hint() == RelKind::Congruence);
  auto s = test::load("semilattice2");
  // 0 <= 1 is admissible for meet but not symmetric.
  auto le = BinRel::from_pairs(2, {{0, 1}});
  CHECK(is_compatible(s, le, RelKind::Admissible));
  CHECK_THROWS_AS(with_verified_kind(s, le, RelKind::Tolerance),
                  std::invalid_argument);
}

TEST_CASE("generate agrees with fixpoint oracle") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + trial % 3;
    auto a = test::random_algebra(rng, n, trial % 2 ? std::vector<std::size_t>{2}
                                                     : std::vector<std::size_t>{1, 3});
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
    PairSet     seed{{pick(rng), pick(rng)}, {pick(rng), pick(rng)}};
    oracle::Rel S(seed.begin(), seed.end());
    CHECK(to_set(generate(a, seed, RelKind::Admissible))
          == oracle::closure(a, S, false, false));
    CHECK(to_set(generate(a, seed, RelKind::Tolerance))
          == oracle::closure(a, S, true, false));
    auto cg = generate(a, seed, RelKind::Congruence);
    CHECK(to_set(cg) == oracle::closure(a, S, true, true));
    CHECK(cg.kind_hint() == RelKind::Congruence);
  }
}

TEST_CASE("congruence lattices") {
  CHECK(all_congruences(test::load("trivial")).size() == 1);
  CHECK(all_congruences(test::load("z2")).size() == 2);
  CHECK(all_congruences(test::load("lattice2")).size() == 2);
  // chain 0<1<2: 0, {01}, {12}, 1.
  CHECK(all_congruences(test::load("chain3")).size() == 4);

  std::mt19937 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n    = 2 + trial % 4;
    auto        a    = test::random_algebra(rng, n, {1, 2});
    auto        cons = all_congruences(a);
    auto        ref  = oracle::congruences(a);
    REQUIRE(cons.size() == ref.size());
    std::set<oracle::Rel> got;
    for (auto const& c : cons) {
      got.insert(to_set(c));
    }
    CHECK(got == std::set<oracle::Rel>(ref.begin(), ref.end()));
    for (std::size_t i = 1; i < cons.size(); ++i) {
      CHECK(cons[i - 1].count() <= cons[i].count());
    }
  }
  std::vector<std::vector<Element>> big(1, std::vector<Element>(13 * 13, 0));
  FiniteAlgebra b("big", 13, Signature({{"f", 2}}), big);
  CHECK_THROWS_AS(all_congruences(b), CapExceeded);
}

TEST_CASE("join and modular law on corpus") {
  for (auto const& a : test::corpus()) {
    auto cons = all_congruences(a);
    for (auto const& x : cons) {
      for (auto const& y : cons) {
        auto j = cong_join(x, y);
        CHECK(x.subset_of(j));
        CHECK(y.subset_of(j));
        CHECK(is_compatible(a, j, RelKind::Congruence));
        for (auto const& z : cons) {
          CHECK(meet(x, compose(y, meet(x, z)))
                == compose(meet(x, y), meet(x, z)));
        }
      }
    }
  }
  CHECK_THROWS_AS(cong_join(BinRel::from_pairs(2, {{0, 1}}), BinRel(2)),
                  std::invalid_argument);
}
