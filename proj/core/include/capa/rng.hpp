#ifndef CAPA_RNG_HPP
#define CAPA_RNG_HPP

#include <complex>
#include <cstdint>

namespace capa {

/// Philox 4x32-10 counter-based generator. Stateless: each (key, counter)
/// pair maps to an independent 128-bit block, which makes sample draws
/// reproducible under any partitioning of sample indices across workers.
struct PhiloxBlock {
  std::uint32_t v[4];
};

PhiloxBlock philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                       std::uint32_t c3, std::uint32_t k0, std::uint32_t k1);

/// Streams keep draws for different construction methods decorrelated.
enum class RngStream : std::uint32_t {
  spectral = 0,  // shared by the MIMO baseline (same physical field)
  kl = 1,
};

/// One standard complex Gaussian CN(0,1) draw, keyed by
/// (seed, sample_index, element index, stream). Box-Muller on the Philox
/// block output.
std::complex<double> complex_normal(std::uint64_t seed,
                                    std::uint64_t sample_index,
                                    std::uint32_t element, RngStream stream);

/// Uniform draw in (0,1) on the same keying (element space is disjoint from
/// complex_normal uses only if callers separate streams/elements).
double uniform01(std::uint64_t seed, std::uint64_t sample_index,
                 std::uint32_t element, RngStream stream);

}  // namespace capa

#endif
