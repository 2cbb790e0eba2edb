#include "cmod/kernels.hpp"

#include <algorithm>
#include <bit>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cmod::kernels {

  namespace {

    inline void compose_row(std::size_t                    a,
                            std::size_t                    wpr,
                            std::span<std::uint64_t const> r,
                            std::span<std::uint64_t const> s,
                            std::span<std::uint64_t>       out) {
      std::uint64_t*       dst = out.data() + a * wpr;
      std::uint64_t const* src = r.data() + a * wpr;
      std::fill(dst, dst + wpr, 0);
      for (std::size_t w = 0; w < wpr; ++w) {
        std::uint64_t bits = src[w];
        while (bits != 0) {
          std::size_t          b    = w * 64 + std::countr_zero(bits);
          std::uint64_t const* srow = s.data() + b * wpr;
          for (std::size_t k = 0; k < wpr; ++k) {
            dst[k] |= srow[k];
          }
          bits &= bits - 1;
        }
      }
    }

    inline void transpose_row(std::size_t                    b,
                              std::size_t                    n,
                              std::size_t                    wpr,
                              std::span<std::uint64_t const> r,
                              std::span<std::uint64_t>       out) {
      std::uint64_t* dst = out.data() + b * wpr;
      std::fill(dst, dst + wpr, 0);
      std::size_t const   word = b >> 6;
      std::uint64_t const mask = std::uint64_t(1) << (b & 63);
      for (std::size_t a = 0; a < n; ++a) {
        if (r[a * wpr + word] & mask) {
          dst[a >> 6] |= std::uint64_t(1) << (a & 63);
        }
      }
    }

  }  // namespace

  void compose_serial(std::size_t                    n,
                      std::size_t                    wpr,
                      std::span<std::uint64_t const> r,
                      std::span<std::uint64_t const> s,
                      std::span<std::uint64_t>       out) {
    for (std::size_t a = 0; a < n; ++a) {
      compose_row(a, wpr, r, s, out);
    }
  }

  void compose_parallel(std::size_t                    n,
                        std::size_t                    wpr,
                        std::span<std::uint64_t const> r,
                        std::span<std::uint64_t const> s,
                        std::span<std::uint64_t>       out) {
    auto const rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t a = 0; a < rows; ++a) {
      compose_row(static_cast<std::size_t>(a), wpr, r, s, out);
    }
  }

  void compose(std::size_t                    n,
               std::size_t                    wpr,
               std::span<std::uint64_t const> r,
               std::span<std::uint64_t const> s,
               std::span<std::uint64_t>       out) {
    if (n >= parallel_threshold && max_threads() > 1) {
      compose_parallel(n, wpr, r, s, out);
    } else {
      compose_serial(n, wpr, r, s, out);
    }
  }

  void transpose_serial(std::size_t                    n,
                        std::size_t                    wpr,
                        std::span<std::uint64_t const> r,
                        std::span<std::uint64_t>       out) {
    for (std::size_t b = 0; b < n; ++b) {
      transpose_row(b, n, wpr, r, out);
    }
  }

  void transpose_parallel(std::size_t                    n,
                          std::size_t                    wpr,
                          std::span<std::uint64_t const> r,
                          std::span<std::uint64_t>       out) {
    auto const rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < rows; ++b) {
      transpose_row(static_cast<std::size_t>(b), n, wpr, r, out);
    }
  }

  void transpose(std::size_t                    n,
                 std::size_t                    wpr,
                 std::span<std::uint64_t const> r,
                 std::span<std::uint64_t>       out) {
    if (n >= parallel_threshold && max_threads() > 1) {
      transpose_parallel(n, wpr, r, out);
    } else {
      transpose_serial(n, wpr, r, out);
    }
  }

  int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }

  void set_threads(int n) noexcept {
#ifdef _OPENMP
    if (n > 0) {
      omp_set_num_threads(n);
    }
#else
    (void) n;
#endif
  }

}  // namespace cmod::kernels
