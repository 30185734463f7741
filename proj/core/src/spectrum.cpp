#include "capa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace capa {

double sinc_kernel(double dz, double k0) {
  if (!(k0 > 0.0)) throw std::invalid_argument("sinc_kernel: requires k0 > 0");
  // Taylor switch keeps full accuracy through the removable singularity.
  const double u = k0 * dz;
  if (std::abs(u) < 1e-4) {
    return (k0 / std::numbers::pi) * (1.0 - u * u / 6.0 * (1.0 - u * u / 20.0));
  }
  return std::sin(u) / (std::numbers::pi * dz);
}

double autocorrelation(double z, double zp, double k0) {
  return (std::numbers::pi / k0) * sinc_kernel(z - zp, k0);
}

Eigen::MatrixXd build_operator(const Aperture& ap, const QuadratureGrid& grid) {
  (void)ap;  // geometry is already baked into the grid
  const int n = grid.order;
  if (n < 2) throw std::invalid_argument("build_operator: order < 2");

  Eigen::VectorXd sw(n);
  for (int i = 0; i < n; ++i) sw(i) = std::sqrt(grid.weights[i]);

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = grid.weights[i] * (kWavenumber / std::numbers::pi);
    for (int j = 0; j < i; ++j) {
      const double v =
          sw(i) * sinc_kernel(grid.nodes[i] - grid.nodes[j], kWavenumber) *
          sw(j);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

Eigen::MatrixXd build_operator(const Aperture& ap, int order) {
  const auto grid =
      gauss_legendre(order, -ap.length_wl / 2.0, ap.length_wl / 2.0);
  return build_operator(ap, grid);
}

int default_order(const Aperture& ap) {
  return std::max(64, static_cast<int>(std::ceil(4.0 * dof(ap))));
}

SpectralDecomposition eigendecompose(const Aperture& ap, int order,
                                     bool keep_eigenfunctions) {
  if (order < 2) throw std::invalid_argument("eigendecompose: order < 2");

  SpectralDecomposition d;
  d.dof = dof(ap);
  d.grid = gauss_legendre(order, -ap.length_wl / 2.0, ap.length_wl / 2.0);

  const Eigen::MatrixXd m = build_operator(ap, d.grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, keep_eigenfunctions ? Eigen::ComputeEigenvectors
                             : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: eigensolver failed at order " +
                             std::to_string(order) + ", L = " +
                             std::to_string(ap.length_wl));

  // Eigen returns ascending order; flip to descending. The flip is a stable
  // reindexing, so equal eigenvalues keep the solver's relative order.
  d.eps.resize(order);
  d.sigma.resize(order);
  for (int l = 0; l < order; ++l) {
    double e = solver.eigenvalues()(order - 1 - l);
    if (e < 0.0) e = 0.0;  // PSD operator, negatives are round-off
    d.eps[l] = e;
    d.sigma[l] = 0.5 * e;  // (pi/k0) eps in wavelength units
  }

  if (keep_eigenfunctions) {
    // Columns of the eigenvector matrix v relate to eigenfunction samples by
    // phi_l(z_i) = v_i / sqrt(w_i); they stay orthonormal under the weights.
    d.eigfun.resize(order, order);
    for (int l = 0; l < order; ++l) {
      const auto v = solver.eigenvectors().col(order - 1 - l);
      for (int i = 0; i < order; ++i)
        d.eigfun(i, l) = v(i) / std::sqrt(d.grid.weights[i]);
    }
  }
  return d;
}

double landau_count(double threshold, double dof) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("landau_count: threshold must be in (0,1)");
  if (!(dof > 1.0))
    throw std::invalid_argument("landau_count: requires dof > 1");
  const double s = std::sqrt(threshold);
  const double corr = std::log((1.0 - s) / s) /
                      (std::numbers::pi * std::numbers::pi);
  return dof + corr * std::log(dof);
}

}  // namespace capa
