#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/free_algebra.hpp"
#include "cmod/kernels.hpp"

using namespace cmod;

namespace {
  struct Mats {
    std::size_t                n, wpr;
    std::vector<std::uint64_t> r, s, out;
  };

  Mats random_mats(std::size_t n, double density) {
    Mats m{n, (n + 63) / 64, {}, {}, {}};
    m.r.assign(n * m.wpr, 0);
    m.s.assign(n * m.wpr, 0);
    m.out.assign(n * m.wpr, 0);
    std::mt19937_64             rng(n);
    std::bernoulli_distribution coin(density);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (coin(rng)) {
          m.r[a * m.wpr + b / 64] |= std::uint64_t(1) << (b % 64);
        }
        if (coin(rng)) {
          m.s[a * m.wpr + b / 64] |= std::uint64_t(1) << (b % 64);
        }
      }
    }
    return m;
  }

  template <bool Par>
  void BM_compose(benchmark::State& st) {
    auto m = random_mats(static_cast<std::size_t>(st.range(0)), 0.02);
    for (auto _ : st) {
      if constexpr (Par) {
        kernels::compose_parallel(m.n, m.wpr, m.r, m.s, m.out);
      } else {
        kernels::compose_serial(m.n, m.wpr, m.r, m.s, m.out);
      }
      benchmark::DoNotOptimize(m.out.data());
    }
    st.counters["threads"] = Par ? kernels::max_threads() : 1;
  }

  template <bool Par>
  void BM_transpose(benchmark::State& st) {
    auto m = random_mats(static_cast<std::size_t>(st.range(0)), 0.3);
    for (auto _ : st) {
      if constexpr (Par) {
        kernels::transpose_parallel(m.n, m.wpr, m.r, m.out);
      } else {
        kernels::transpose_serial(m.n, m.wpr, m.r, m.out);
      }
      benchmark::DoNotOptimize(m.out.data());
    }
  }

  template <bool Par>
  void BM_free_lattice(benchmark::State& st) {
    auto        l = load_algebra(std::string(CMOD_DATA_DIR) + "/lattice2.alg");
    FreeOptions o;
    o.parallel = Par;
    for (auto _ : st) {
      auto f = build_free(l, static_cast<std::size_t>(st.range(0)), o);
      benchmark::DoNotOptimize(f.size());
    }
  }
}  // namespace

BENCHMARK(BM_compose<false>)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_compose<true>)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_transpose<false>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_transpose<true>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_free_lattice<false>)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_free_lattice<true>)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
