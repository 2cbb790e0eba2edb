#ifndef CMOD_TESTS_SUITES_HPP_
#define CMOD_TESTS_SUITES_HPP_

#include <random>
#include <vector>

#include "cmod/constructions.hpp"
#include "cmod/error.hpp"
#include "cmod/identity_engine.hpp"
#include "cmod/relation.hpp"
#include "cmod/term_chain.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

namespace cmod::test {

  template <class T>
  T const& pick(std::mt19937& rng, std::vector<T> const& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  }

  inline Element pick_elem(std::mt19937& rng, std::size_t n) {
    return std::uniform_int_distribution<Element>(0, static_cast<Element>(n - 1))(rng);
  }

  inline std::vector<Element> row(BinRel const& r, Element a) {
    std::vector<Element> out;
    for (Element b = 0; b < r.size(); ++b) {
      if (r.contains(a, b)) {
        out.push_back(b);
      }
    }
    return out;
  }

  inline oracle::Rel to_set(BinRel const& r) {
    oracle::Rel out;
    for (auto [a, b] : r.pairs()) {
      out.emplace(a, b);
    }
    return out;
  }

  // Algebras with Day and Gumm chains for the randomized suites.
  struct Modular {
    FiniteAlgebra       alg;
    TermChain           day, gumm;
    std::vector<BinRel> congs, adms;
  };

  inline std::vector<Modular> modular_suite(std::size_t want) {
    std::vector<Modular> out;
    for (auto name : {"z2", "lattice2", "chain3"}) {
      auto a = load(name);
      out.push_back({a, *search_day(a, 10), *search_gumm(a, 10),
                     all_congruences(a), relation_family(a, VarKind::Adm)});
    }
    FreeOptions small;
    small.cap_entries = 1'000'000;
    small.cap_work    = 1e8;
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 400 && out.size() < want; ++trial) {
      auto a = random_algebra(rng, 2 + trial % 2, {3}, true);
      try {
        auto g = search_gumm(a, 8, small);
        auto d = g ? search_day(a, 8, small) : std::nullopt;
        if (d && g) {
          out.push_back({a, *d, *g, all_congruences(a),
                         relation_family(a, VarKind::Adm)});
        }
      } catch (CapExceeded const&) {
      }
    }
    return out;
  }

}  // namespace cmod::test

#endif  // CMOD_TESTS_SUITES_HPP_
