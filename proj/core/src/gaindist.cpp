#include "capa/gaindist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capa/specfun.hpp"

namespace capa {

namespace {

GainSpectrum finalize_spectrum(std::vector<double> sigmas) {
  std::stable_sort(sigmas.begin(), sigmas.end(), std::greater<double>());
  if (sigmas.empty() || !(sigmas.front() > 0.0))
    throw std::invalid_argument("GainSpectrum: no positive eigenvalues");
  const double cutoff = 1e-12 * sigmas.front();
  while (!sigmas.empty() && sigmas.back() <= cutoff) sigmas.pop_back();
  GainSpectrum spec;
  spec.sigma_min = sigmas.back();
  spec.sigma = std::move(sigmas);
  return spec;
}

// log of C0 = prod_l sigma_min / sigma_l, the common series prefactor.
double log_prefactor(const GainSpectrum& spec) {
  double lc = 0.0;
  for (double s : spec.sigma) lc += std::log(spec.sigma_min / s);
  return lc;
}

std::vector<double> power_sums(const GainSpectrum& spec, int k_max) {
  // S_k = sum_l b_l^k with b_l = 1 - sigma_min/sigma_l in [0, 1).
  std::vector<double> base(spec.sigma.size());
  for (std::size_t l = 0; l < base.size(); ++l)
    base[l] = 1.0 - spec.sigma_min / spec.sigma[l];
  std::vector<double> s(k_max + 1, 0.0);
  std::vector<double> pw(base);
  for (int k = 1; k <= k_max; ++k) {
    double acc = 0.0;
    for (std::size_t l = 0; l < base.size(); ++l) {
      acc += pw[l];
      pw[l] *= base[l];
    }
    s[k] = acc;
  }
  return s;
}

}  // namespace

GainSpectrum make_gain_spectrum(const SpectralDecomposition& decomp) {
  if (decomp.dof < 0.5)
    throw std::invalid_argument("make_gain_spectrum: dof < 1");
  const auto count = static_cast<std::size_t>(std::floor(decomp.dof + 0.5));
  if (decomp.sigma.size() < count)
    throw std::invalid_argument(
        "make_gain_spectrum: decomposition shorter than DOF");
  std::vector<double> lead(decomp.sigma.begin(),
                           decomp.sigma.begin() + count);
  if (!(lead.back() > 0.0))
    throw std::invalid_argument(
        "make_gain_spectrum: leading eigenvalues are zero");
  return finalize_spectrum(std::move(lead));
}

GainSpectrum gain_spectrum_from_sigmas(std::vector<double> sigmas) {
  for (double s : sigmas)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("GainSpectrum: negative or non-finite entry");
  return finalize_spectrum(std::move(sigmas));
}

PsiSeries psi_coefficients(const GainSpectrum& spec, int q_max) {
  if (q_max < 0) throw std::invalid_argument("psi_coefficients: q_max < 0");
  PsiSeries out;
  out.q_max = q_max;
  out.psi.assign(q_max + 1, 0.0);
  out.psi[0] = 1.0;
  const auto s = power_sums(spec, q_max);
  for (int q = 1; q <= q_max; ++q) {
    double acc = 0.0;
    for (int k = 1; k <= q; ++k) acc += s[k] * out.psi[q - k];
    out.psi[q] = acc / q;
  }
  return out;
}

int choose_truncation(const GainSpectrum& spec, double tol, int cap_q) {
  if (!(tol > 0.0)) throw std::invalid_argument("choose_truncation: tol <= 0");
  const double c0 = std::exp(log_prefactor(spec));
  // sum_q C0 psi_q = 1 exactly, so the deficit after Q terms bounds every
  // term-wise CDF/PDF remainder; the deficit itself shrinks geometrically
  // with ratio max_l (1 - sigma_min/sigma_l).
  double mass = c0;  // q = 0 term
  if (1.0 - mass <= tol) return 0;
  std::vector<double> base(spec.sigma.size());
  for (std::size_t l = 0; l < base.size(); ++l)
    base[l] = 1.0 - spec.sigma_min / spec.sigma[l];
  std::vector<double> pw(base);
  std::vector<double> sk;  // S_1..S_q built incrementally
  std::vector<double> psi{1.0};
  for (int q = 1; q <= cap_q; ++q) {
    double sq = 0.0;
    for (std::size_t l = 0; l < base.size(); ++l) {
      sq += pw[l];
      pw[l] *= base[l];
    }
    sk.push_back(sq);
    double acc = 0.0;
    for (int k = 1; k <= q; ++k) acc += sk[k - 1] * psi[q - k];
    psi.push_back(acc / q);
    mass += c0 * psi.back();
    if (1.0 - mass <= tol) return q;
  }
  throw std::runtime_error(
      "choose_truncation: series cap hit; sigma_min/sigma_max too small");
}

PsiSeries make_psi_series(const GainSpectrum& spec, double tol, int cap_q) {
  PsiSeries out;
  try {
    out = psi_coefficients(spec, choose_truncation(spec, tol, cap_q));
    out.converged = true;
  } catch (const std::runtime_error&) {
    out = psi_coefficients(spec, cap_q);
    out.converged = false;
  }
  out.tail_tol = tol;
  return out;
}

double pdf(const GainSpectrum& spec, const PsiSeries& psi, double x) {
  if (x < 0.0) throw std::invalid_argument("pdf: x < 0");
  const double d = static_cast<double>(spec.size());
  const double sm = spec.sigma_min;
  const double lc = log_prefactor(spec);
  if (x == 0.0) {
    // Only the q = 0 term with D = 1 has nonzero density at the origin.
    return spec.size() == 1 ? std::exp(lc) / sm : 0.0;
  }
  const double lx = std::log(x);
  double sum = 0.0;
  for (int q = 0; q <= psi.q_max; ++q) {
    if (psi.psi[q] <= 0.0) continue;
    const double n = d + q;
    const double lt = lc + std::log(psi.psi[q]) + (n - 1.0) * lx - x / sm -
                      n * std::log(sm) - std::lgamma(n);
    sum += std::exp(lt);
  }
  return sum;
}

double cdf(const GainSpectrum& spec, const PsiSeries& psi, double x) {
  if (x < 0.0) throw std::invalid_argument("cdf: x < 0");
  if (x == 0.0) return 0.0;
  const double d = static_cast<double>(spec.size());
  const double c0 = std::exp(log_prefactor(spec));
  const double u = x / spec.sigma_min;
  double sum = 0.0;
  for (int q = 0; q <= psi.q_max; ++q) {
    if (psi.psi[q] <= 0.0) continue;
    sum += c0 * psi.psi[q] * gamma_p(d + q, u);
  }
  return sum;
}

GainMoments moments(const GainSpectrum& spec) {
  GainMoments m{0.0, 0.0};
  for (double s : spec.sigma) {
    m.mean += s;
    m.variance += s * s;
  }
  return m;
}

}  // namespace capa
