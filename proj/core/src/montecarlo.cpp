#include "capa/montecarlo.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace capa {

namespace {

using cplx = std::complex<double>;

std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = a + (b - a) * i / (n - 1);
  return z;
}

std::vector<double> trapezoid_weights(double a, double b, int n) {
  const double h = (b - a) / (n - 1);
  std::vector<double> w(n, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

void run_indexed(std::int64_t n, int workers,
                 const std::function<void(std::int64_t, std::int64_t)>& chunk) {
  if (workers <= 1 || n < 2 * workers) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t step = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * step;
    const std::int64_t hi = std::min<std::int64_t>(n, lo + step);
    if (lo >= hi) break;
    pool.emplace_back(chunk, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SimulationConfig resolve_config(const Aperture& ap, SimulationConfig cfg) {
  if (cfg.n_samples <= 0)
    throw std::invalid_argument("SimulationConfig: n_samples must be > 0");
  const int d = static_cast<int>(std::floor(dof(ap) + 0.5));
  const int min_bins = std::max(64, 8 * d);
  const int min_z =
      std::max(33, static_cast<int>(16.0 * std::ceil(ap.length_wl)) + 1);
  if (cfg.kappa_bins == 0) cfg.kappa_bins = min_bins;
  if (cfg.z_points == 0) cfg.z_points = min_z;
  if (cfg.kappa_bins < min_bins || cfg.z_points < min_z)
    cfg.resolution_warning = true;
  if (cfg.kappa_bins < 2 || cfg.z_points < 2)
    throw std::invalid_argument("SimulationConfig: grid too small");
  return cfg;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAPA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SpectralFieldSimulator::SpectralFieldSimulator(const Aperture& ap,
                                               const SimulationConfig& cfg)
    : ap_(ap), cfg_(resolve_config(ap, cfg)) {
  const int nb = cfg_.kappa_bins;
  const double dk = 2.0 * kWavenumber / nb;
  kappa_.resize(nb);
  for (int n = 0; n < nb; ++n)
    kappa_[n] = -kWavenumber + (n + 0.5) * dk;
  amp_ = std::sqrt(dk / (2.0 * kWavenumber));

  const double half = ap_.length_wl / 2.0;
  z_ = uniform_grid(-half, half, cfg_.z_points);
  zw_ = trapezoid_weights(-half, half, cfg_.z_points);

  basis_.resize(cfg_.z_points, nb);
  for (int i = 0; i < cfg_.z_points; ++i)
    for (int n = 0; n < nb; ++n)
      basis_(i, n) = amp_ * std::polar(1.0, kappa_[n] * z_[i]);

  // Low-rank factor of the gain quadratic form G = w^H (E^H C E) w, so a
  // batch draw costs rank x bins instead of z_points x bins.
  Eigen::MatrixXcd a = basis_.adjoint() *
                       Eigen::Map<const Eigen::VectorXd>(zw_.data(), cfg_.z_points)
                           .asDiagonal() *
                       basis_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("SpectralFieldSimulator: factor eigensolve failed");
  const auto& ev = es.eigenvalues();
  const double cutoff = 1e-12 * ev(nb - 1);
  int rank = 0;
  for (int k = 0; k < nb; ++k)
    if (ev(k) > cutoff) ++rank;
  factor_.resize(rank, nb);
  int row = 0;
  for (int k = nb - 1; k >= 0 && row < rank; --k) {
    if (ev(k) <= cutoff) continue;
    factor_.row(row++) = std::sqrt(ev(k)) * es.eigenvectors().col(k).adjoint();
  }
}

Eigen::VectorXcd SpectralFieldSimulator::draw_weights(
    std::uint64_t sample_index) const {
  Eigen::VectorXcd w(cfg_.kappa_bins);
  for (int n = 0; n < cfg_.kappa_bins; ++n)
    w(n) = complex_normal(cfg_.seed, sample_index,
                          static_cast<std::uint32_t>(n), RngStream::spectral);
  return w;
}

Eigen::VectorXcd SpectralFieldSimulator::field(
    std::uint64_t sample_index) const {
  return basis_ * draw_weights(sample_index);
}

Eigen::VectorXcd SpectralFieldSimulator::field_at(
    std::uint64_t sample_index, std::span<const double> z) const {
  const Eigen::VectorXcd w = draw_weights(sample_index);
  Eigen::VectorXcd out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    cplx acc = 0.0;
    for (int n = 0; n < cfg_.kappa_bins; ++n)
      acc += std::polar(amp_, kappa_[n] * z[i]) * w(n);
    out(static_cast<Eigen::Index>(i)) = acc;
  }
  return out;
}

double SpectralFieldSimulator::gain(std::uint64_t sample_index) const {
  return (factor_ * draw_weights(sample_index)).squaredNorm();
}

SampleBatch SpectralFieldSimulator::batch(std::int64_t n_samples,
                                          int workers) const {
  SampleBatch b;
  b.method = SampleMethod::spectral;
  b.config = cfg_;
  b.config.n_samples = n_samples;
  b.gains.resize(n_samples);
  run_indexed(n_samples, worker_count(workers),
              [&](std::int64_t lo, std::int64_t hi) {
                for (std::int64_t i = lo; i < hi; ++i)
                  b.gains[i] = gain(static_cast<std::uint64_t>(i));
              });
  return b;
}

KlFieldSimulator::KlFieldSimulator(const SpectralDecomposition& decomp,
                                   const SimulationConfig& cfg)
    : decomp_(&decomp), cfg_(cfg) {
  if (decomp.eigfun.size() == 0)
    throw std::invalid_argument(
        "KlFieldSimulator: decomposition lacks eigenfunction samples");
  double total = 0.0;
  for (double s : decomp.sigma) total += s;
  double acc = 0.0;
  n_modes_ = static_cast<int>(decomp.sigma.size());
  for (std::size_t l = 0; l < decomp.sigma.size(); ++l) {
    acc += decomp.sigma[l];
    if (acc >= (1.0 - 1e-6) * total) {
      n_modes_ = static_cast<int>(l) + 1;
      break;
    }
  }
}

Eigen::VectorXcd KlFieldSimulator::mode_draws(
    std::uint64_t sample_index) const {
  Eigen::VectorXcd phi(n_modes_);
  for (int l = 0; l < n_modes_; ++l)
    phi(l) = complex_normal(cfg_.seed, sample_index,
                            static_cast<std::uint32_t>(l), RngStream::kl);
  return phi;
}

Eigen::VectorXcd KlFieldSimulator::field(std::uint64_t sample_index) const {
  const Eigen::VectorXcd phi = mode_draws(sample_index);
  Eigen::VectorXcd coef(n_modes_);
  for (int l = 0; l < n_modes_; ++l)
    coef(l) = std::sqrt(decomp_->sigma[l]) * phi(l);
  return decomp_->eigfun.leftCols(n_modes_).cast<cplx>() * coef;
}

double KlFieldSimulator::gain(std::uint64_t sample_index) const {
  const Eigen::VectorXcd phi = mode_draws(sample_index);
  double g = 0.0;
  for (int l = 0; l < n_modes_; ++l) g += decomp_->sigma[l] * std::norm(phi(l));
  return g;
}

SampleBatch KlFieldSimulator::batch(std::int64_t n_samples, int workers) const {
  SampleBatch b;
  b.method = SampleMethod::kl;
  b.config = cfg_;
  b.config.n_samples = n_samples;
  b.gains.resize(n_samples);
  run_indexed(n_samples, worker_count(workers),
              [&](std::int64_t lo, std::int64_t hi) {
                for (std::int64_t i = lo; i < hi; ++i)
                  b.gains[i] = gain(static_cast<std::uint64_t>(i));
              });
  return b;
}

MimoBaselineSimulator::MimoBaselineSimulator(const Aperture& ap,
                                             const SimulationConfig& cfg)
    : cfg_(resolve_config(ap, cfg)) {
  if (ap.length_wl < 0.5)
    throw std::invalid_argument(
        "MimoBaselineSimulator: aperture shorter than one element spacing");
  const int n = static_cast<int>(std::floor(2.0 * ap.length_wl)) + 1;
  positions_.resize(n);
  for (int i = 0; i < n; ++i)
    positions_[i] = 0.5 * (i - 0.5 * (n - 1));

  const int nb = cfg_.kappa_bins;
  const double dk = 2.0 * kWavenumber / nb;
  const double amp = std::sqrt(dk / (2.0 * kWavenumber));
  basis_.resize(n, nb);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < nb; ++m)
      basis_(i, m) =
          amp * std::polar(1.0, (-kWavenumber + (m + 0.5) * dk) * positions_[i]);
}

double MimoBaselineSimulator::gain(std::uint64_t sample_index) const {
  Eigen::VectorXcd w(basis_.cols());
  for (int m = 0; m < basis_.cols(); ++m)
    w(m) = complex_normal(cfg_.seed, sample_index,
                          static_cast<std::uint32_t>(m), RngStream::spectral);
  return element_length_wl() * (basis_ * w).squaredNorm();
}

SampleBatch MimoBaselineSimulator::batch(std::int64_t n_samples,
                                         int workers) const {
  SampleBatch b;
  b.method = SampleMethod::mimo;
  b.config = cfg_;
  b.config.n_samples = n_samples;
  b.gains.resize(n_samples);
  run_indexed(n_samples, worker_count(workers),
              [&](std::int64_t lo, std::int64_t hi) {
                for (std::int64_t i = lo; i < hi; ++i)
                  b.gains[i] = gain(static_cast<std::uint64_t>(i));
              });
  return b;
}

double sample_gain(const Eigen::VectorXcd& field,
                   std::span<const double> weights) {
  if (static_cast<std::size_t>(field.size()) != weights.size())
    throw std::invalid_argument("sample_gain: size mismatch");
  double g = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    g += weights[i] * std::norm(field(static_cast<Eigen::Index>(i)));
  return g;
}

McCapacity ergodic_capacity_mc(const SampleBatch& batch,
                               const SnrConfig& snr) {
  if (batch.gains.empty())
    throw std::invalid_argument("ergodic_capacity_mc: empty batch");
  const double n = static_cast<double>(batch.gains.size());
  double sum = 0.0, sum2 = 0.0;
  for (double g : batch.gains) {
    const double c = std::log2(1.0 + snr.gamma_bar * g);
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  const double se = batch.gains.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return {mean, se};
}

SampleBatch spectrum_batch(const GainSpectrum& spec, std::uint64_t seed,
                           std::int64_t n_samples, int workers) {
  SampleBatch b;
  b.method = SampleMethod::kl;
  b.config.seed = seed;
  b.config.n_samples = n_samples;
  b.gains.resize(n_samples);
  const int d = static_cast<int>(spec.size());
  run_indexed(n_samples, worker_count(workers),
              [&](std::int64_t lo, std::int64_t hi) {
                for (std::int64_t i = lo; i < hi; ++i) {
                  double g = 0.0;
                  for (int l = 0; l < d; ++l)
                    g += spec.sigma[l] *
                         std::norm(complex_normal(
                             seed, static_cast<std::uint64_t>(i),
                             static_cast<std::uint32_t>(l), RngStream::kl));
                  b.gains[i] = g;
                }
              });
  return b;
}

}  // namespace capa
