#ifndef CMOD_TESTS_CORPUS_HPP_
#define CMOD_TESTS_CORPUS_HPP_

#include <random>
#include <string>
#include <vector>

#include "cmod/algebra.hpp"

namespace cmod::test {

  inline std::string data_path(std::string const& name) {
    return std::string(CMOD_DATA_DIR) + "/" + name + ".alg";
  }

  inline FiniteAlgebra load(std::string const& name) {
    return load_algebra(data_path(name));
  }

  inline std::vector<std::string> corpus_names() {
    return {"trivial", "z2", "lattice2", "chain3", "semilattice2"};
  }

  inline std::vector<FiniteAlgebra> corpus() {
    std::vector<FiniteAlgebra> out;
    for (auto const& n : corpus_names()) {
      out.push_back(load(n));
    }
    return out;
  }

  // Random algebra with the given operation arities.
  inline FiniteAlgebra random_algebra(std::mt19937&                   rng,
                                      std::size_t                     n,
                                      std::vector<std::size_t> const& arities,
                                      bool idempotent = false) {
    std::vector<OpSymbol>             ops;
    std::vector<std::vector<Element>> tables;
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
    for (std::size_t i = 0; i < arities.size(); ++i) {
      std::size_t r   = arities[i];
      std::size_t len = 1;
      for (std::size_t k = 0; k < r; ++k) {
        len *= n;
      }
      std::vector<Element> t(len);
      for (std::size_t idx = 0; idx < len; ++idx) {
        t[idx] = pick(rng);
      }
      if (idempotent && r > 0) {
        for (Element x = 0; x < n; ++x) {
          std::size_t idx = 0;
          for (std::size_t k = 0; k < r; ++k) {
            idx = idx * n + x;
          }
          t[idx] = x;
        }
      }
      ops.push_back({"f" + std::to_string(i), r});
      tables.push_back(std::move(t));
    }
    return FiniteAlgebra("random", n, Signature(std::move(ops)),
                         std::move(tables));
  }

}  // namespace cmod::test

#endif  // CMOD_TESTS_CORPUS_HPP_
