#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/modes.hpp"
#include "spdc/numerics.hpp"
#include "oracles.hpp"

namespace md = spdc::modes;
using md::GaussianMode;
using md::Role;
using std::numbers::pi;

namespace {

constexpr double kDeg = pi / 180.0;

GaussianMode mode(double w, double theta, Role role, double lambda = 702.2e-9,
                  double n = 1.66) {
  return GaussianMode{w, lambda, theta, n, role};
}

double parseval_S(double xi) {
  if (xi == 0.0) return pi;
  return pi * std::sqrt(pi) / (2.0 * std::sqrt(2.0) * xi) * std::erf(std::sqrt(2.0) * xi);
}

}  // namespace

TEST_CASE("normalization_alpha") {
  CHECK(md::normalization_alpha(std::sqrt(2.0 / pi)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(md::normalization_alpha(82e-6) == doctest::Approx(9730.299521986164).epsilon(1e-13));
  CHECK(md::normalization_alpha(164e-6) ==
        doctest::Approx(md::normalization_alpha(82e-6) / 2).epsilon(1e-15));
  CHECK_THROWS_AS(md::normalization_alpha(0.0), spdc::Error);

  // alpha^2 * integral |U|^2 over a wide grid.
  const double w = 82e-6;
  const double a = md::normalization_alpha(w);
  const int n = 400;
  const double half = 6.0 * w;
  const double h = 2.0 * half / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -half + (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double y = -half + (j + 0.5) * h;
      sum += std::exp(-2.0 * (x * x + y * y) / (w * w));
    }
  }
  CHECK(std::abs(a * a * sum * h * h - 1.0) < 1e-6);
}

TEST_CASE("confinement_correction") {
  CHECK(md::confinement_correction(82e-6, 702.2e-9, 1.665) < 1e-6);
  CHECK(md::confinement_correction(82e-6, 702.2e-9, 1.665) ==
        doctest::Approx(6.70047e-7).epsilon(1e-5));
  const double lambda = 702.2e-9;
  const double w = 100.0 * lambda / 1.665;
  CHECK(md::confinement_correction(w, lambda, 1.665) ==
        doctest::Approx(2.5330263828671207e-6).epsilon(1e-9));
  CHECK(md::confinement_correction(1.0, lambda, 1.665) < 1e-12);
}

TEST_CASE("GaussianMode validation") {
  CHECK_NOTHROW(mode(82e-6, 0.0, Role::Pump).validate());
  CHECK_THROWS_AS(mode(82e-6, 0.01, Role::Pump).validate(), spdc::Error);
  CHECK_THROWS_AS(mode(-1.0, 0.0, Role::Signal).validate(), spdc::Error);
  CHECK_THROWS_AS(mode(82e-6, 0.0, Role::Signal, 702.2e-9, 0.9).validate(), spdc::Error);
  CHECK_THROWS_AS(mode(82e-6, 0.0, Role::Signal, 0.0).validate(), spdc::Error);
}

TEST_CASE("geometry_coefficients: collinear and symmetric cases") {
  const double w = 50e-6;
  const auto g = md::geometry_coefficients(mode(w, 0, Role::Pump), mode(w, 0, Role::Signal),
                                           mode(w, 0, Role::Idler), 1e-3);
  CHECK(g.A == doctest::Approx(3.0 / (w * w)).epsilon(1e-15));
  CHECK(g.C == g.A);
  CHECK(g.D == 0.0);
  CHECK(g.F == 0.0);
  CHECK(g.H == 0.0);
  CHECK(g.Xi == 0.0);

  const double th = 0.05;
  const double l = 2e-3;
  const auto s = md::geometry_coefficients(mode(w, 0, Role::Pump), mode(w, th, Role::Signal),
                                           mode(w, th, Role::Idler), l);
  CHECK(std::abs(s.D) < 1e-6);
  CHECK(s.H == doctest::Approx(2.0 * std::sin(th) * std::sin(th) / (w * w)).epsilon(1e-12));
  CHECK(s.Xi == doctest::Approx(std::sqrt(2.0) * std::sin(th) * l / (2.0 * w)).epsilon(1e-12));
}

TEST_CASE("geometry_coefficients: worked example walk-off") {
  const double w = 82e-6;
  const double th = 3.1 * kDeg;
  const auto g = md::geometry_coefficients(mode(w, 0, Role::Pump), mode(w, th, Role::Signal),
                                           mode(w, th, Role::Idler), 2e-3);
  CHECK(g.Xi == doctest::Approx(0.933).epsilon(0.005));
  CHECK(g.Xi == doctest::Approx(0.9326706190257007).epsilon(1e-12));
}

TEST_CASE("geometry_coefficients: H >= 0 and A >= C > 0 on random geometries") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> waist(5e-6, 500e-6);
  std::uniform_real_distribution<double> angle(0.0, 0.5);
  int bad = 0;
  for (int k = 0; k < 100000; ++k) {
    const auto g = md::geometry_coefficients(
        mode(waist(rng), 0, Role::Pump), mode(waist(rng), angle(rng), Role::Signal),
        mode(waist(rng), angle(rng), Role::Idler), 1e-3);
    if (!(g.H >= 0.0 && g.Xi >= 0.0 && g.A >= g.C && g.C > 0.0 && g.F >= 0.0)) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("with_mismatch") {
  const double w = 50e-6;
  const auto g = md::geometry_coefficients(mode(w, 0, Role::Pump), mode(w, 0, Role::Signal),
                                           mode(w, 0, Role::Idler), 1e-3);
  const auto m = md::with_mismatch(g, 0.0, 1234.0, 1e-3);
  CHECK(m.K == 1234.0);
  CHECK(m.delta_phi == doctest::Approx(0.617).epsilon(1e-14));
}

TEST_CASE("phi_z: examples and thin limit") {
  CHECK(md::phi_z(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(md::phi_z(0.0, pi)) < 1e-12);
  CHECK(md::phi_z(1.0, 0.0) == doctest::Approx(0.746824132812427).epsilon(1e-12));
  for (int k = 0; k < 1000; ++k) {
    const double x = -20.0 + 40.0 * k / 999.0;
    CHECK(std::abs(md::phi_z(0.0, x) - spdc::numerics::sinc(x)) < 1e-9);
    CHECK(md::phi_z_thin(x) == spdc::numerics::sinc(x));
  }
  CHECK_THROWS_AS(md::phi_z(-0.1, 0.0), spdc::Error);
}

TEST_CASE("phi_z: exact erf identity at zero mismatch") {
  for (int k = 1; k <= 100; ++k) {
    const double xi = 10.0 * k / 100.0;
    const double ref = std::sqrt(pi) / (2.0 * xi) * std::erf(xi);
    CHECK(std::abs(md::phi_z(xi, 0.0) - ref) < 1e-10);
  }
}

TEST_CASE("phi_z: even in delta_phi and bounded") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> xi(0.0, 8.0);
  std::uniform_real_distribution<double> dphi(-60.0, 60.0);
  for (int k = 0; k < 2000; ++k) {
    const double a = xi(rng);
    const double b = dphi(rng);
    const double v = md::phi_z(a, b);
    CHECK(std::abs(v - md::phi_z(a, -b)) < 1e-13);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v >= -0.5);
  }
}

TEST_CASE("phi_z_thin: half-power point") {
  CHECK(md::phi_z_thin(0.0) == 1.0);
  CHECK(std::abs(md::phi_z_thin(pi)) < 1e-16);
  CHECK(md::phi_z_thin(1.3915573782515105) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(md::phi_z_thin(1.3916) == doctest::Approx(0.707090583728102).epsilon(1e-12));
}

TEST_CASE("phi_z_thick") {
  CHECK(md::phi_z_thick(1.0) == doctest::Approx(0.746824132812427).epsilon(1e-12));
  CHECK(md::phi_z_thick(50.0) == doctest::Approx(std::sqrt(pi) / 100.0).epsilon(1e-10));
  CHECK(md::phi_z_thick(1e-9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(md::phi_z_thick(0.0) == 1.0);
  for (double xi : {3.0, 4.0, 6.0, 10.0}) {
    CHECK(std::abs(md::phi_z_thick(xi) / md::phi_z(xi, 0.0) - 1.0) < 1e-6);
  }
}

TEST_CASE("overlap_phi: collinear equal waists") {
  const double w = 60e-6;
  const double l = 1e-3;
  const auto g = md::geometry_coefficients(mode(w, 0, Role::Pump), mode(w, 0, Role::Signal),
                                           mode(w, 0, Role::Idler), l);
  CHECK(md::overlap_phi(g, 0.0, 0.0, l) == doctest::Approx(pi * w * w * l / 3.0).epsilon(1e-12));
  const double dky = 2e4;
  CHECK(md::overlap_phi(g, dky, 0.0, l) ==
        doctest::Approx(pi * w * w * l / 3.0 * std::exp(-dky * dky / (4.0 * g.C))).epsilon(1e-12));
}

TEST_CASE("overlap_phi: matches a 3-D brute-force integration") {
  struct Instance {
    double wp, ws, wi, th_s, th_i, dky, dkz, l;
  };
  const Instance cases[] = {
      {20e-6, 25e-6, 22e-6, 4.0 * kDeg, 3.0 * kDeg, 3e4, 1.5e4, 300e-6},
      {15e-6, 15e-6, 15e-6, 6.0 * kDeg, 6.0 * kDeg, -4e4, 2e4, 200e-6},
      {30e-6, 18e-6, 24e-6, 2.0 * kDeg, 5.0 * kDeg, 5e4, -1e4, 400e-6},
  };
  for (const auto& c : cases) {
    const auto g = md::geometry_coefficients(
        mode(c.wp, 0, Role::Pump), mode(c.ws, c.th_s, Role::Signal),
        mode(c.wi, c.th_i, Role::Idler), c.l);
    const double closed = md::overlap_phi(g, c.dky, c.dkz, c.l);
    const double brute =
        spdc::test::brute_force_overlap(c.wp, c.ws, c.wi, c.th_s, c.th_i, c.dky, c.dkz, c.l);
    CHECK(std::abs(closed / brute - 1.0) < 1e-3);
  }
}

TEST_CASE("spectral integral: Parseval identity, anchors, monotonicity") {
  const auto s0 = md::spectral_integral(0.0);
  CHECK(std::abs(s0.value - pi) < 1e-6);
  CHECK(md::spectral_integral_S(0.933) == doctest::Approx(1.98).epsilon(0.005));
  CHECK(md::spectral_integral_S(5.0) == doctest::Approx(0.3937).epsilon(1e-4));
  for (int k = 0; k <= 20; ++k) {
    const double xi = 5.0 * k / 20.0;
    CHECK(std::abs(md::spectral_integral_S(xi) - parseval_S(xi)) < 1e-6);
  }
  double previous = md::spectral_integral_S(0.0);
  for (int k = 1; k < 50; ++k) {
    const double s = md::spectral_integral_S(5.0 * k / 49.0);
    CHECK(s < previous);
    previous = s;
  }
  CHECK_THROWS_AS(md::spectral_integral_S(-1.0), spdc::Error);
}

TEST_CASE("phi_z: Gaussian shape at large Xi, lower peaks for larger Xi") {
  // Least-squares line through log(phi_z) against delta_phi^2 on [-15, 15].
  const int n = 2001;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(n), ys(n);
  for (int k = 0; k < n; ++k) {
    const double d = -15.0 + 30.0 * k / (n - 1);
    xs[k] = d * d;
    ys[k] = std::log(md::phi_z(4.0, d));
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(ys[k] - icpt - slope * xs[k]));
  CHECK(worst < 1e-4);
  CHECK(slope == doctest::Approx(-1.0 / 64.0).epsilon(1e-3));

  double previous = 2.0;
  for (double xi : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double peak = md::phi_z(xi, 0.0);
    CHECK(peak < previous);
    previous = peak;
  }
}
