#include "capa/capacity.hpp"

#include <cmath>
#include <numbers>

#include "capa/quadrature.hpp"
#include "capa/specfun.hpp"

namespace capa {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Kahan-compensated accumulator in extended precision; the alternating
// factorial terms cancel heavily at high DOF.
struct Compensated {
  long double sum = 0.0L;
  long double c = 0.0L;
  void add(long double v) {
    const long double y = v - c;
    const long double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

double require_converged(const PsiSeries& psi) {
  if (!psi.converged)
    throw std::invalid_argument("capacity: psi series did not converge");
  return 0.0;
}

}  // namespace

CapacityResult avg_capacity(const GainSpectrum& spec, const PsiSeries& psi,
                            const SnrConfig& snr) {
  require_converged(psi);
  const double mu = 1.0 / (snr.gamma_bar * spec.sigma_min);
  if (mu > 700.0)
    throw RegimeError(
        "avg_capacity: 1/(gamma_bar sigma_min) > 700, exp overflow; "
        "use capacity_quadrature_oracle");

  const int d = static_cast<int>(spec.size());
  double log_c0 = 0.0;
  for (double s : spec.sigma) log_c0 += std::log(spec.sigma_min / s);

  const long double ei = exp_integral_ei(-mu);  // Ei(-mu) < 0
  const long double lmu = std::log(static_cast<long double>(mu));

  Compensated total;
  int terms = 0;
  for (int q = 0; q <= psi.q_max; ++q) {
    if (psi.psi[q] <= 0.0 && q > 0) continue;
    const int m = d + q;
    Compensated inner;
    for (int v = 0; v < m; ++v) {
      const int p = m - 1 - v;  // power of mu on the Ei term
      const long double lfac = std::lgamma(static_cast<long double>(p + 1));
      // (-1)^{m-v} e^{mu} mu^p Ei(-mu) / p!, with Ei(-mu) < 0
      const long double ei_mag = std::exp(mu + p * lmu - lfac) * (-ei);
      inner.add((m - v) % 2 == 0 ? -ei_mag : ei_mag);
      // sum_{u=1..p} Gamma(u) (-mu)^{p-u} / p!
      for (int u = 1; u <= p; ++u) {
        const long double mag = std::exp(
            std::lgamma(static_cast<long double>(u)) + (p - u) * lmu - lfac);
        inner.add(((p - u) % 2 == 0) ? mag : -mag);
      }
    }
    const long double weight =
        std::exp(static_cast<long double>(log_c0) +
                 std::log(static_cast<long double>(psi.psi[q])));
    total.add(weight * inner.sum);
    ++terms;
  }

  CapacityResult res;
  res.ergodic_bits = static_cast<double>(total.sum / kLn2);
  res.terms_used = terms;
  const auto asym = high_snr_asymptote(spec, psi);
  res.slope = asym.slope;
  res.offset_3db = asym.offset_3db;
  return res;
}

double capacity_quadrature_oracle(const GainSpectrum& spec,
                                  const PsiSeries& psi, const SnrConfig& snr) {
  const auto m = moments(spec);
  const double x_max = m.mean + 12.0 * std::sqrt(m.variance);
  const double g = snr.gamma_bar;
  return integrate_adaptive(
      [&](double x) {
        return std::log2(1.0 + g * x) * pdf(spec, psi, x);
      },
      0.0, x_max, 1e-9);
}

HighSnrAsymptote high_snr_asymptote(const GainSpectrum& spec,
                                    const PsiSeries& psi) {
  require_converged(psi);
  const int d = static_cast<int>(spec.size());
  double log_c0 = 0.0;
  for (double s : spec.sigma) log_c0 += std::log(spec.sigma_min / s);
  const double c0 = std::exp(log_c0);
  const double lsm = std::log(spec.sigma_min);

  double acc = 0.0;
  for (int q = 0; q <= psi.q_max; ++q) {
    if (psi.psi[q] <= 0.0 && q > 0) continue;
    acc += psi.psi[q] * (digamma(static_cast<double>(d + q)) + lsm);
  }
  return {1.0, -c0 * acc / kLn2};
}

}  // namespace capa
