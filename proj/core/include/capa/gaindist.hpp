#ifndef CAPA_GAINDIST_HPP
#define CAPA_GAINDIST_HPP

#include <vector>

#include "capa/spectrum.hpp"

namespace capa {

/// Weights of the normalized channel gain G = sum_l sigma_l |Phi_l|^2,
/// truncated to the leading DOF eigenvalues, sorted descending. Entries
/// below 1e-12 * sigma_max are dropped at construction.
struct GainSpectrum {
  std::vector<double> sigma;
  double sigma_min = 0.0;

  std::size_t size() const { return sigma.size(); }
};

/// Recursive series coefficients of the single-gamma-series expansion of
/// the sum-of-exponentials density. psi[0] = 1 and all entries are
/// nonnegative.
struct PsiSeries {
  std::vector<double> psi;
  int q_max = 0;
  double tail_tol = 0.0;  // bound on the probability mass beyond q_max
  bool converged = true;
};

/// Truncates the decomposition to its leading round(2L/lambda) channel
/// eigenvalues. Throws if the decomposition is too short or the leading
/// eigenvalues vanish.
GainSpectrum make_gain_spectrum(const SpectralDecomposition& decomp);

/// Builds a spectrum from explicit component weights (tests, synthetic
/// cases). Sorts descending and drops near-zero entries.
GainSpectrum gain_spectrum_from_sigmas(std::vector<double> sigmas);

/// Exact recursion psi_q = (1/q) sum_{k=1..q} S_k psi_{q-k} with
/// S_k = sum_l (1 - sigma_min/sigma_l)^k, computed through q_max.
PsiSeries psi_coefficients(const GainSpectrum& spec, int q_max);

/// Smallest Q whose remaining series mass (1 - sum_{q<=Q} C0 psi_q, where
/// C0 = prod_l sigma_min/sigma_l) is below tol; the mass tail is geometric
/// with ratio max_l (1 - sigma_min/sigma_l). Capped at cap_q.
int choose_truncation(const GainSpectrum& spec, double tol, int cap_q = 20000);

/// choose_truncation followed by psi_coefficients; tail_tol and converged
/// reflect the stopping rule.
PsiSeries make_psi_series(const GainSpectrum& spec, double tol = 1e-10,
                          int cap_q = 20000);

/// Density of the normalized gain at x >= 0. Gamma-function factors are
/// evaluated in the log domain.
double pdf(const GainSpectrum& spec, const PsiSeries& psi, double x);

/// Distribution function; a psi-weighted sum of regularized lower
/// incomplete gamma terms. Monotone nondecreasing, in [0, 1 + tail_tol].
double cdf(const GainSpectrum& spec, const PsiSeries& psi, double x);

struct GainMoments {
  double mean;      // sum sigma_l
  double variance;  // sum sigma_l^2
};
GainMoments moments(const GainSpectrum& spec);

}  // namespace capa

#endif
