#include "capa/rng.hpp"

#include <cmath>
#include <numbers>

namespace capa {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  // 53 significant bits, shifted into the open interval (0, 1).
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxBlock philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                       std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
  std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, x0, hi0, lo0);
    mulhilo(kPhiloxM1, x2, hi1, lo1);
    const std::uint32_t y0 = hi1 ^ x1 ^ k0;
    const std::uint32_t y1 = lo1;
    const std::uint32_t y2 = hi0 ^ x3 ^ k1;
    const std::uint32_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return {{x0, x1, x2, x3}};
}

std::complex<double> complex_normal(std::uint64_t seed,
                                    std::uint64_t sample_index,
                                    std::uint32_t element, RngStream stream) {
  const auto b = philox4x32(
      static_cast<std::uint32_t>(sample_index),
      static_cast<std::uint32_t>(sample_index >> 32), element,
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32));
  const double u1 = to_unit(b.v[0], b.v[1]);
  const double u2 = to_unit(b.v[2], b.v[3]);
  // Box-Muller scaled so that E{|z|^2} = 1.
  const double r = std::sqrt(-std::log(u1));
  const double phase = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phase), r * std::sin(phase)};
}

double uniform01(std::uint64_t seed, std::uint64_t sample_index,
                 std::uint32_t element, RngStream stream) {
  const auto b = philox4x32(
      static_cast<std::uint32_t>(sample_index),
      static_cast<std::uint32_t>(sample_index >> 32), element,
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32));
  return to_unit(b.v[0], b.v[1]);
}

}  // namespace capa
