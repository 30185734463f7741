#ifndef CAPA_MONTECARLO_HPP
#define CAPA_MONTECARLO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "capa/aperture.hpp"
#include "capa/capacity.hpp"
#include "capa/rng.hpp"
#include "capa/spectrum.hpp"

namespace capa {

struct SimulationConfig {
  std::uint64_t seed = 42;
  std::int64_t n_samples = 100000;
  int kappa_bins = 0;  // 0: pick max(64, 8 * round(DOF))
  int z_points = 0;    // 0: pick >= 16 points per wavelength
  // Set when a caller-supplied resolution is below the recommended
  // minimum; the simulation still runs.
  bool resolution_warning = false;
};

/// Fills in default grid resolutions for the aperture and validates the
/// config. Returns the (possibly warning-flagged) effective config.
SimulationConfig resolve_config(const Aperture& ap, SimulationConfig cfg);

enum class SampleMethod { spectral, kl, mimo };

struct SampleBatch {
  std::vector<double> gains;  // draws of G = integral |g|^2 dz, >= 0
  SampleMethod method = SampleMethod::spectral;
  SimulationConfig config;
};

/// Effective worker count: `requested` if positive, else the CAPA_THREADS
/// environment variable, else hardware concurrency.
int worker_count(int requested = 0);

/// Direct spectral construction of the aperture field: a Riemann sum of
/// plane waves over a uniform midpoint wavenumber grid on [-k0, k0] with
/// i.i.d. CN(0,1) bin weights, so the discrete autocorrelation converges
/// to the sinc kernel as kappa_bins grows.
class SpectralFieldSimulator {
 public:
  SpectralFieldSimulator(const Aperture& ap, const SimulationConfig& cfg);

  /// CN(0,1) weight of every wavenumber bin for this sample index.
  Eigen::VectorXcd draw_weights(std::uint64_t sample_index) const;

  /// Field samples on the internal uniform z grid.
  Eigen::VectorXcd field(std::uint64_t sample_index) const;

  /// Field samples at arbitrary aperture positions (same weight draw).
  Eigen::VectorXcd field_at(std::uint64_t sample_index,
                            std::span<const double> z) const;

  /// Gain of one draw; algebraically identical to the trapezoid integral
  /// of |field|^2 (evaluated through a low-rank factor of the quadratic
  /// form, modes below 1e-12 of the largest dropped).
  double gain(std::uint64_t sample_index) const;

  SampleBatch batch(std::int64_t n_samples, int workers = 0) const;

  const std::vector<double>& z_grid() const { return z_; }
  const std::vector<double>& z_weights() const { return zw_; }
  const SimulationConfig& config() const { return cfg_; }

 private:
  Aperture ap_;
  SimulationConfig cfg_;
  std::vector<double> kappa_;
  double amp_ = 0.0;  // sqrt(dkappa / (2 k0)) per bin
  std::vector<double> z_, zw_;
  Eigen::MatrixXcd basis_;   // z grid x bins, amplitude included
  Eigen::MatrixXcd factor_;  // rank x bins; G = |factor w|^2
};

/// Karhunen-Loeve construction from the spectral decomposition: field =
/// sum_l sqrt(sigma_l) phi_l(z) Phi_l over the modes holding all but 1e-6
/// of the eigenvalue mass.
class KlFieldSimulator {
 public:
  KlFieldSimulator(const SpectralDecomposition& decomp,
                   const SimulationConfig& cfg);

  Eigen::VectorXcd mode_draws(std::uint64_t sample_index) const;
  Eigen::VectorXcd field(std::uint64_t sample_index) const;  // on GL grid

  /// Gain of one draw, sum_l sigma_l |Phi_l|^2; equals the Gauss-Legendre
  /// quadrature of |field|^2 by orthonormality of the eigenfunctions.
  double gain(std::uint64_t sample_index) const;

  SampleBatch batch(std::int64_t n_samples, int workers = 0) const;

  int modes() const { return n_modes_; }

 private:
  const SpectralDecomposition* decomp_;
  SimulationConfig cfg_;
  int n_modes_ = 0;
};

/// Half-wavelength-spaced discrete array sampling the same spectral field,
/// with per-element aperture gain equal to the element length
/// lambda / (2 sqrt(pi)).
class MimoBaselineSimulator {
 public:
  MimoBaselineSimulator(const Aperture& ap, const SimulationConfig& cfg);

  static constexpr double element_length_wl() {
    return 0.28209479177387814;  // 1 / (2 sqrt(pi))
  }

  int n_elements() const { return static_cast<int>(positions_.size()); }
  const std::vector<double>& positions() const { return positions_; }

  double gain(std::uint64_t sample_index) const;
  SampleBatch batch(std::int64_t n_samples, int workers = 0) const;

 private:
  SimulationConfig cfg_;
  std::vector<double> positions_;
  Eigen::MatrixXcd basis_;  // element x bins
};

/// Quadrature approximation of integral |g|^2 over the aperture.
double sample_gain(const Eigen::VectorXcd& field,
                   std::span<const double> weights);

struct McCapacity {
  double mean_bits;
  double stderr_bits;
};

/// Sample mean and standard error of log2(1 + gamma_bar G) over a batch.
McCapacity ergodic_capacity_mc(const SampleBatch& batch, const SnrConfig& snr);

/// Synthetic batch drawn directly from a gain spectrum,
/// G = sum_l sigma_l |Phi_l|^2 with i.i.d. CN(0,1) draws. Used to exercise
/// the closed forms against sampling on exactly the law they integrate.
SampleBatch spectrum_batch(const GainSpectrum& spec, std::uint64_t seed,
                           std::int64_t n_samples, int workers = 0);

}  // namespace capa

#endif
