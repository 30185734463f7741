#include <doctest.h>

#include <cmath>
#include <numbers>

#include "capa/spectrum.hpp"

using namespace capa;

namespace {
int count_above(const std::vector<double>& eps, double t) {
  int n = 0;
  for (double e : eps)
    if (e > t) ++n;
  return n;
}
}  // namespace

TEST_CASE("sinc_kernel") {
  CHECK(sinc_kernel(0.0, kWavenumber) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sinc_kernel(0.5, kWavenumber) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sinc_kernel(0.25, kWavenumber) ==
        doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-14));
  // Taylor branch continuity around the switch point.
  CHECK(sinc_kernel(1e-5, kWavenumber) ==
        doctest::Approx(sinc_kernel(2e-5, kWavenumber)).epsilon(1e-8));
  CHECK_THROWS(sinc_kernel(0.1, 0.0));
}

TEST_CASE("autocorrelation") {
  CHECK(autocorrelation(1.3, 1.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(autocorrelation(0.0, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(autocorrelation(0.25, 0.0) ==
        doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(autocorrelation(-0.3, 0.1) == autocorrelation(0.1, -0.3));
}

TEST_CASE("dof") {
  CHECK(dof(Aperture(10.0)) == 20.0);
  CHECK(dof(Aperture(0.5)) == 1.0);
  CHECK(dof(Aperture(2.5)) == 5.0);
  CHECK_THROWS(Aperture(0.0));
  CHECK_THROWS(Aperture(-1.0));
}

TEST_CASE("build_operator structure") {
  const Aperture ap(3.7);
  const auto grid = gauss_legendre(40, -ap.length_wl / 2, ap.length_wl / 2);
  const auto m = build_operator(ap, grid);

  for (int i = 0; i < 40; ++i) {
    CHECK(m(i, i) == doctest::Approx(grid.weights[i] * kWavenumber /
                                     std::numbers::pi)
                         .epsilon(1e-15));
    for (int j = 0; j < i; ++j) CHECK(m(i, j) == m(j, i));
  }
  CHECK(m.trace() == doctest::Approx(dof(ap)).epsilon(1e-12));
  CHECK_THROWS(build_operator(ap, 1));
}

TEST_CASE("trace identity across apertures and orders") {
  for (double L : {0.5, 2.5, 10.0, 40.0}) {
    const Aperture ap(L);
    for (int order : {16, 64, default_order(ap)}) {
      const auto d = eigendecompose(ap, order, false);
      double sum = 0.0;
      for (double e : d.eps) sum += e;
      CHECK(std::abs(sum - dof(ap)) <= 1e-10 * dof(ap));
    }
  }
}

TEST_CASE("eigendecompose L=10") {
  const Aperture ap(10.0);
  const auto d = eigendecompose(ap, 128);

  double sum = 0.0;
  for (double e : d.eps) sum += e;
  CHECK(sum == doctest::Approx(20.0).epsilon(1e-6));

  CHECK(d.eps.front() <= 1.0 + 1e-8);
  for (std::size_t l = 1; l < d.eps.size(); ++l)
    CHECK(d.eps[l] <= d.eps[l - 1]);
  for (std::size_t l = 0; l < d.eps.size(); ++l) {
    CHECK(d.eps[l] >= 0.0);
    CHECK(d.sigma[l] == 0.5 * d.eps[l]);
  }

  const int n025 = count_above(d.eps, 0.25);
  CHECK(n025 >= 18);
  CHECK(n025 <= 22);

  // Deterministic repeat.
  const auto d2 = eigendecompose(ap, 128);
  CHECK(d.eps == d2.eps);

  CHECK_THROWS(eigendecompose(ap, 1));
}

TEST_CASE("polarization step for L=10") {
  const auto d = eigendecompose(Aperture(10.0), 128, false);
  CHECK(d.eps[9] > 0.99);    // index ceil(DOF/2) = 10, 1-based
  CHECK(d.eps[39] < 1e-3);   // index 2*DOF = 40
}

TEST_CASE("monotone refinement of individual eigenvalues") {
  const Aperture ap(10.0);
  const auto a = eigendecompose(ap, 64, false);
  const auto b = eigendecompose(ap, 128, false);
  const auto c = eigendecompose(ap, 256, false);
  for (int l : {0, 4, 14, 19, 24}) {
    const double gap1 = std::abs(a.eps[l] - b.eps[l]);
    const double gap2 = std::abs(b.eps[l] - c.eps[l]);
    CHECK(gap2 <= gap1 + 1e-13);
  }
}

TEST_CASE("eigenfunction orthonormality under quadrature weights") {
  const auto d = eigendecompose(Aperture(5.0), 96);
  REQUIRE(d.eigfun.size() > 0);
  const int n = d.grid.order;
  for (int a = 0; a < 30; ++a) {
    for (int b = a; b < 30; ++b) {
      double ip = 0.0;
      for (int i = 0; i < n; ++i)
        ip += d.grid.weights[i] * d.eigfun(i, a) * d.eigfun(i, b);
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("landau_count closed form") {
  CHECK(landau_count(0.25, 20.0) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(landau_count(0.5, 20.0) ==
        doctest::Approx(20.0 - 0.2675243294859).epsilon(1e-10));
  CHECK(landau_count(0.01, 20.0) ==
        doctest::Approx(20.0 + 0.666935).epsilon(1e-4));
  CHECK_THROWS(landau_count(0.0, 20.0));
  CHECK_THROWS(landau_count(1.0, 20.0));
  CHECK_THROWS(landau_count(-0.5, 20.0));
  CHECK_THROWS(landau_count(0.5, 1.0));
}

TEST_CASE("landau prediction tracks the computed spectrum") {
  for (double L : {10.0, 20.0, 40.0}) {
    const Aperture ap(L);
    const auto d = eigendecompose(ap, default_order(ap), false);
    for (double t : {0.1, 0.25, 0.5, 0.9}) {
      const double pred = landau_count(t, dof(ap));
      const double got = count_above(d.eps, t);
      CHECK(std::abs(got - pred) <= 2.0 + std::log(dof(ap)));
    }
  }
}
