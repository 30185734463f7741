#include "capa/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace capa {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;

// E1(x) for 0 < x <= 1 via the convergent series
//   E1(x) = -gamma - ln x + sum_{n>=1} (-1)^{n+1} x^n / (n n!).
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int n = 1; n <= 60; ++n) {
    term *= -x / n;
    const double add = -term / n;
    sum += add;
    if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// E1(x) for x > 1 via the continued fraction
//   E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
// evaluated with the modified Lentz algorithm.
double e1_contfrac(double x) {
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

}  // namespace

double exp_integral_ei(double x) {
  if (!(x < 0.0))
    throw std::invalid_argument("exp_integral_ei: requires x < 0");
  const double t = -x;  // E1 argument
  if (t > 740.0) return -0.0;  // below double underflow of e^{-t}/t
  return t <= 1.0 ? -e1_series(t) : -e1_contfrac(t);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma: requires x > 0");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic expansion with Bernoulli numbers B2..B14.
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0 -
                  inv2 * (1.0 / 12.0)))))));
  return result + std::log(x) - 0.5 * inv - series;
}

namespace {

// Series representation of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1 (modified Lentz).
double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_p: requires a > 0");
  if (x < 0.0) throw std::invalid_argument("gamma_p: requires x >= 0");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

}  // namespace capa
