#ifndef CAPA_SPECTRUM_HPP
#define CAPA_SPECTRUM_HPP

#include <Eigen/Dense>
#include <vector>

#include "capa/aperture.hpp"
#include "capa/quadrature.hpp"

namespace capa {

/// Eigen-spectrum of the aperture-limited sinc autocorrelation operator.
///
/// eps holds the eigenvalues of the concentration kernel K(z,z') in
/// descending order; sigma the eigenvalues of the autocorrelation
/// R_g = (pi/k0) K, i.e. sigma_l = eps_l / 2 in wavelength units.
/// eigfun(i, l) samples the l-th eigenfunction at grid node i; the columns
/// are orthonormal under the quadrature weights.
struct SpectralDecomposition {
  std::vector<double> eps;
  std::vector<double> sigma;
  double dof = 0.0;  // 2L/lambda
  QuadratureGrid grid;
  Eigen::MatrixXd eigfun;  // empty when eigenfunctions were not retained
};

/// Band-limiting kernel k(dz) = sin(k0 dz) / (pi dz), with the removable
/// singularity k(0) = k0/pi.
double sinc_kernel(double dz, double k0);

/// Normalized spatial autocorrelation R_g(z, z') = (pi/k0) k(z - z');
/// equals 1 at z = z'.
double autocorrelation(double z, double zp, double k0 = kWavenumber);

/// Symmetrized Nystrom discretization M_ij = sqrt(w_i) K(z_i, z_j) sqrt(w_j)
/// on a Gauss-Legendre grid over [-L/2, L/2].
Eigen::MatrixXd build_operator(const Aperture& ap, const QuadratureGrid& grid);
Eigen::MatrixXd build_operator(const Aperture& ap, int order);

/// Quadrature order that resolves the spectrum through the transition band.
int default_order(const Aperture& ap);

/// Full symmetric eigensolve of the discretized kernel. Eigenvalues are
/// clamped to [0, inf) and sorted descending; eigenfunction samples are
/// retained when keep_eigenfunctions is set.
SpectralDecomposition eigendecompose(const Aperture& ap, int order,
                                     bool keep_eigenfunctions = true);

/// Asymptotic prediction of |{l : eps_l > threshold}|:
///   DOF + (1/pi^2) ln((1 - sqrt(t))/sqrt(t)) ln(DOF).
/// Natural logarithms; the transition-band correction uses sqrt(threshold)
/// rather than the classical Landau-Widom (1-t)/t variant.
double landau_count(double threshold, double dof);

}  // namespace capa

#endif
