#ifndef CAPA_APERTURE_HPP
#define CAPA_APERTURE_HPP

#include <numbers>
#include <stdexcept>

namespace capa {

// All lengths are carried in units of the carrier wavelength, so the
// wavenumber is the fixed constant k0 = 2*pi and the channel eigenvalues
// sigma_l = eps_l / 2 are dimensionless.
inline constexpr double kWavenumber = 2.0 * std::numbers::pi;

/// Linear continuous aperture on the z-axis, centered at the origin.
struct Aperture {
  double length_wl;            ///< aperture length L in wavelengths
  double carrier_hz = 2.4e9;   ///< carrier frequency, reporting only

  Aperture(double length_wl_, double carrier_hz_ = 2.4e9)
      : length_wl(length_wl_), carrier_hz(carrier_hz_) {
    if (!(length_wl > 0.0))
      throw std::invalid_argument("Aperture: length_wl must be positive");
    if (!(carrier_hz > 0.0))
      throw std::invalid_argument("Aperture: carrier_hz must be positive");
  }
};

/// Effective degrees of freedom of the band- and aperture-limited channel,
/// 2*L/lambda.
inline double dof(const Aperture& ap) { return 2.0 * ap.length_wl; }

}  // namespace capa

#endif
