#ifndef CAPA_CAPACITY_HPP
#define CAPA_CAPACITY_HPP

#include <stdexcept>

#include "capa/gaindist.hpp"

namespace capa {

/// Transmit-power / noise-power operating point; gamma_bar = P / sigma^2.
struct SnrConfig {
  double gamma_bar;
  double power_w;
  double noise_v2m;

  static SnrConfig from_power(double power_w, double noise_v2m) {
    if (!(power_w > 0.0) || !(noise_v2m > 0.0))
      throw std::invalid_argument("SnrConfig: power and noise must be > 0");
    return {power_w / noise_v2m, power_w, noise_v2m};
  }
  static SnrConfig from_gamma(double gamma_bar) {
    if (!(gamma_bar > 0.0))
      throw std::invalid_argument("SnrConfig: gamma_bar must be > 0");
    return {gamma_bar, gamma_bar, 1.0};
  }
};

struct CapacityResult {
  double ergodic_bits = 0.0;
  int terms_used = 0;
  double slope = 1.0;       // high-SNR slope, 1 for this channel
  double offset_3db = 0.0;  // high-SNR power offset in 3-dB units
};

/// Thrown when 1/(gamma_bar * sigma_min) > 700 and the closed form would
/// overflow; use capacity_quadrature_oracle in that regime.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form ergodic capacity E{log2(1 + gamma_bar G)} as a psi-weighted
/// double sum over exponential-integral and factorial terms. Alternating
/// contributions are accumulated in extended precision with log-domain
/// magnitudes.
CapacityResult avg_capacity(const GainSpectrum& spec, const PsiSeries& psi,
                            const SnrConfig& snr);

/// Independent check: adaptive quadrature of log2(1 + gamma_bar x) against
/// the gain density over [0, mean + 12 sqrt(var)]. Absolute target 1e-8
/// bits.
double capacity_quadrature_oracle(const GainSpectrum& spec,
                                  const PsiSeries& psi, const SnrConfig& snr);

struct HighSnrAsymptote {
  double slope;       // always 1
  double offset_3db;  // power offset in 3-dB units
};

/// High-SNR expansion E{C} ~ log2(gamma_bar) - offset.
HighSnrAsymptote high_snr_asymptote(const GainSpectrum& spec,
                                    const PsiSeries& psi);

}  // namespace capa

#endif
