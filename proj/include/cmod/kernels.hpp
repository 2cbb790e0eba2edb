#ifndef CMOD_KERNELS_HPP_
#define CMOD_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops.  Each kernel has a serial reference version and
// an OpenMP version producing bit-identical output; the dispatching entry
// points pick one by problem size.

namespace cmod::kernels {

  // out[a] = OR { s[b] : b in r[a] } for row-major n x n bit matrices with
  // `wpr` words per row.  `out` must not alias the inputs.
  void compose_serial(std::size_t                    n,
                      std::size_t                    wpr,
                      std::span<std::uint64_t const> r,
                      std::span<std::uint64_t const> s,
                      std::span<std::uint64_t>       out);
  void compose_parallel(std::size_t                    n,
                        std::size_t                    wpr,
                        std::span<std::uint64_t const> r,
                        std::span<std::uint64_t const> s,
                        std::span<std::uint64_t>       out);
  void compose(std::size_t                    n,
               std::size_t                    wpr,
               std::span<std::uint64_t const> r,
               std::span<std::uint64_t const> s,
               std::span<std::uint64_t>       out);

  void transpose_serial(std::size_t                    n,
                        std::size_t                    wpr,
                        std::span<std::uint64_t const> r,
                        std::span<std::uint64_t>       out);
  void transpose_parallel(std::size_t                    n,
                          std::size_t                    wpr,
                          std::span<std::uint64_t const> r,
                          std::span<std::uint64_t>       out);
  void transpose(std::size_t                    n,
                 std::size_t                    wpr,
                 std::span<std::uint64_t const> r,
                 std::span<std::uint64_t>       out);

  // Problem size (rows) from which the dispatchers use the parallel version.
  inline constexpr std::size_t parallel_threshold = 512;

  // Number of OpenMP threads available (1 without OpenMP).
  int max_threads() noexcept;
  void set_threads(int n) noexcept;

}  // namespace cmod::kernels

#endif  // CMOD_KERNELS_HPP_
