#include "doctest.h"

#include <vector>

#include "cmod/error.hpp"
#include "cmod/term.hpp"
#include "corpus.hpp"

using namespace cmod;

TEST_CASE("variables and group arithmetic") {
  auto                 z = test::load("z2");
  std::vector<Element> asg{1, 1, 0};
  CHECK(eval_term(z, Term::var(0), asg) == 1);
  auto t = Term::app("plus", {Term::var(0),
                              Term::app("plus", {Term::var(1), Term::var(2)})});
  CHECK(eval_term(z, t, asg) == 0);
  CHECK(to_prefix(t) == "(plus x0 (plus x1 x2))");
  CHECK(parse_term("(plus x0 (plus x1 x2))") == t);
  CHECK(t.num_vars() == 3);
  CHECK(t.size() == 5);
  CHECK(t.depth() == 2);
}

TEST_CASE("majority term on the two-element lattice") {
  auto l   = test::load("lattice2");
  auto maj = parse_term(
      "(join (join (meet x0 x1) (meet x1 x2)) (meet x0 x2))");
  std::vector<Element> asg{0, 1, 0};
  CHECK(eval_term(l, maj, asg) == 0);
  CompiledTerm c(l, maj);
  for (Element x = 0; x < 2; ++x) {
    for (Element y = 0; y < 2; ++y) {
      for (Element w = 0; w < 2; ++w) {
        std::vector<Element> v{x, y, w};
        CHECK(c(v) == eval_term(l, maj, v));
        CHECK(c(v) == ((x + y + w) >= 2 ? 1u : 0u));
      }
    }
  }
}

TEST_CASE("evaluation errors") {
  auto                 l = test::load("lattice2");
  std::vector<Element> one{0};
  CHECK_THROWS_AS(eval_term(l, Term::var(2), one), std::out_of_range);
  CHECK_THROWS_AS(eval_term(l, parse_term("(join x0)"), one),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_term(l, parse_term("(nope x0 x0)"), one),
                  std::invalid_argument);
  CHECK_THROWS_AS(CompiledTerm(l, parse_term("(join x0 x0 x0)")),
                  std::invalid_argument);
}

TEST_CASE("prefix parsing") {
  CHECK(to_prefix(parse_term("  ( f  x0 (c) ) ")) == "(f x0 (c))");
  CHECK_THROWS_AS(parse_term("(f x0"), ParseError);
  CHECK_THROWS_AS(parse_term("y"), ParseError);
  CHECK_THROWS_AS(parse_term("x0 x1"), ParseError);
  CHECK_THROWS_AS(parse_term("()"), ParseError);
  try {
    parse_term("(f x0 q)");
  } catch (ParseError const& e) {
    CHECK(e.column() == 7);
  }
}
