#include "capa/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace capa {

QuadratureGrid gauss_legendre(int order, double a, double b) {
  if (order < 2) throw std::invalid_argument("gauss_legendre: order < 2");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: empty interval");

  QuadratureGrid g;
  g.order = order;
  g.nodes.resize(order);
  g.weights.resize(order);

  const int m = (order + 1) / 2;
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);

  for (int i = 0; i < m; ++i) {
    // Chapman initial guess for the i-th root of P_n, refined by Newton.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    g.nodes[i] = xm - xl * z;
    g.nodes[order - 1 - i] = xm + xl * z;
    g.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    g.weights[order - 1 - i] = g.weights[i];
  }
  return g;
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Gk15Result {
  double value;
  double error;
};

Gk15Result gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);

  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double absc = hlgth * kXgk[j];
    const double fsum = f(center - absc) + f(center + absc);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  return {resk * hlgth, std::abs((resk - resg) * hlgth)};
}

double integrate_rec(const std::function<double(double)>& f, double a,
                     double b, double tol, int depth, int max_depth) {
  const auto r = gk15(f, a, b);
  if (r.error <= tol || depth >= max_depth) {
    if (r.error > tol)
      throw std::runtime_error(
          "integrate_adaptive: tolerance not reached (max depth)");
    return r.value;
  }
  const double m = 0.5 * (a + b);
  return integrate_rec(f, a, m, 0.5 * tol, depth + 1, max_depth) +
         integrate_rec(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return integrate_rec(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace capa
