#ifndef CAPA_SPECFUN_HPP
#define CAPA_SPECFUN_HPP

namespace capa {

/// Exponential integral Ei(x) for x < 0, i.e. Ei(x) = -E1(-x).
/// Power series for |x| <= 1, modified Lentz continued fraction beyond.
/// Relative accuracy ~1e-13 over x in [-700, -1e-8].
double exp_integral_ei(double x);

/// Euler's digamma function for x > 0. Recurrence shift into x >= 10
/// followed by the Bernoulli asymptotic expansion.
double digamma(double x);

/// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
double gamma_p(double a, double x);

}  // namespace capa

#endif
