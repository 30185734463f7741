#ifndef CAPA_QUADRATURE_HPP
#define CAPA_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace capa {

/// Nodes and weights of a quadrature rule on a finite interval.
struct QuadratureGrid {
  std::vector<double> nodes;    // strictly increasing, inside [a, b]
  std::vector<double> weights;  // positive, sum to b - a
  int order = 0;
};

/// Gauss-Legendre rule with `order` points on [a, b].
QuadratureGrid gauss_legendre(int order, double a, double b);

/// Adaptive Gauss-Kronrod (15-point) integration of f over [a, b].
/// Bisects until the local error estimate satisfies the absolute target.
/// Throws std::runtime_error if the tolerance cannot be reached.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          int max_depth = 48);

}  // namespace capa

#endif
