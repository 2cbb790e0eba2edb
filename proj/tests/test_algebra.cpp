#include "doctest.h"

#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/error.hpp"
#include "corpus.hpp"

using namespace cmod;

TEST_CASE("lattice and group files parse") {
  auto l = test::load("lattice2");
  CHECK(l.size() == 2);
  CHECK(l.num_ops() == 2);
  std::vector<Element> args{0, 1};
  CHECK(l.apply_op("join", args) == 1);
  CHECK(l.apply_op("meet", args) == 0);

  auto z = parse_algebra("algebra z2\nsize 2\nop plus 2\n0 1\n1 0\n");
  CHECK(z.size() == 2);
  CHECK(z.num_ops() == 1);
  std::vector<Element> one_one{1, 1};
  CHECK(z.apply_op("plus", one_one) == 0);
  CHECK(z.is_commutative(0));
  CHECK_FALSE(z.is_idempotent(0));
}

TEST_CASE("malformed files are rejected with line numbers") {
  SUBCASE("header") {
    try {
      parse_algebra("algebr x\nsize 2\n");
      FAIL("expected ParseError");
    } catch (ParseError const& e) {
      CHECK(e.line() == 1);
      CHECK(std::string(e.what()).find("malformed header") != std::string::npos);
    }
  }
  SUBCASE("entry out of range") {
    try {
      parse_algebra("algebra x\nsize 2\nop f 1\n0 2\n");
      FAIL("expected ParseError");
    } catch (ParseError const& e) {
      CHECK(e.line() == 4);
      CHECK(std::string(e.what()).find("entry out of range") != std::string::npos);
    }
  }
  SUBCASE("short table") {
    CHECK_THROWS_AS(parse_algebra("algebra x\nsize 2\nop f 2\n0 1 1\n"),
                    ParseError);
  }
  SUBCASE("long table") {
    CHECK_THROWS_AS(parse_algebra("algebra x\nsize 2\nop f 1\n0 1 1\n"),
                    ParseError);
  }
  SUBCASE("duplicate op") {
    CHECK_THROWS_AS(
        parse_algebra("algebra x\nsize 1\nop f 1\n0\nop f 1\n0\n"), ParseError);
  }
  SUBCASE("zero size") {
    CHECK_THROWS_AS(parse_algebra("algebra x\nsize 0\n"), ParseError);
  }
}

TEST_CASE("comments and constants") {
  auto a = parse_algebra(
      "# c\nalgebra k\n# more\nsize 3\nop zero 0\n0\nop s 1\n1 2 0\n");
  CHECK(a.num_ops() == 2);
  CHECK(a.apply_op("zero", std::vector<Element>{}) == 0);
  CHECK(a.apply_op("s", std::vector<Element>{2}) == 0);
}

TEST_CASE("apply_op errors") {
  auto l = test::load("lattice2");
  CHECK_THROWS_AS(l.apply_op("nope", std::vector<Element>{0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(l.apply_op("join", std::vector<Element>{0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(l.apply_op("join", std::vector<Element>{0, 2}),
                  std::out_of_range);
}

TEST_CASE("serialize round trip is byte identical") {
  for (auto const& name : test::corpus_names()) {
    auto        a  = test::load(name);
    std::string s1 = serialize(a);
    auto        b  = parse_algebra(s1);
    CHECK(b == a.canonical());
    CHECK(serialize(b) == s1);
  }
  auto p = test::load("pixley3");
  CHECK(serialize(parse_algebra(serialize(p))) == serialize(p));
}

TEST_CASE("canonical form orders operations by name") {
  auto a = parse_algebra("algebra x\nsize 1\nop z 1\n0\nop a 2\n0\n");
  auto c = a.canonical();
  CHECK(c.signature()[0].name == "a");
  CHECK(c.signature()[1].name == "z");
}

TEST_CASE("apply_op agrees with the raw table") {
  for (auto const& a : test::corpus()) {
    for (std::size_t op = 0; op < a.num_ops(); ++op) {
      std::size_t          ar = a.signature()[op].arity;
      auto                 t  = a.table(op);
      std::vector<Element> args(ar, 0);
      for (std::size_t idx = 0; idx < t.size(); ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = ar; i-- > 0;) {
          args[i] = static_cast<Element>(rest % a.size());
          rest /= a.size();
        }
        CHECK(a.apply_op(a.signature()[op].name, args) == t[idx]);
      }
    }
  }
}

TEST_CASE("checked_pow") {
  CHECK(checked_pow(3, 4, 1000) == 81);
  CHECK(checked_pow(0, 0, 1) == 1);
  CHECK_THROWS_AS(checked_pow(10, 10, 1000), CapExceeded);
}
