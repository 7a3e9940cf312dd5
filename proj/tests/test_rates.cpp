#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spdc/constants.hpp"
#include "spdc/errors.hpp"
#include "spdc/numerics.hpp"
#include "spdc/rates.hpp"

namespace rt = spdc::rates;
namespace mat = spdc::materials;
using std::numbers::pi;

namespace {

constexpr double kDeg = pi / 180.0;

const mat::MaterialDatabase& database() {
  static const auto db =
      mat::MaterialDatabase::load(SPDC_SOURCE_DIR "/data/materials.json");
  return db;
}

// BBO type-II indices at 351.1 -> 702.2 + 702.2 nm, fixed by hand so the
// tests do not depend on the config loader.
rt::SourceConfig source(double theta = 0.0, double waist = 82e-6, double length = 2e-3) {
  rt::SourceConfig c;
  c.name = "test";
  c.material = "BBO";
  c.pump_power = 1e-3;
  c.pump = {waist, 351.1e-9, 0.0, 1.6278484842396623, spdc::modes::Role::Pump};
  c.signal = {waist, 702.2e-9, theta, 1.6639626578376507, spdc::modes::Role::Signal};
  c.idler = {waist, 702.2e-9, theta, 1.5929156994645715, spdc::modes::Role::Idler};
  c.crystal = mat::CrystalSpec::from_material(database().find("BBO"), length,
                                              49.7 * kDeg, 60.0 * kDeg);
  c.d_eff = -8.826911098350884e-13;
  c.solid_angle = 3.3e-5;
  return c;
}

rt::RateOptions no_samples() {
  rt::RateOptions o;
  o.spectral_points = 0;
  return o;
}

double trapezoid(const std::vector<rt::SpectralSample>& s) {
  double sum = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    sum += 0.5 * (s[k].density + s[k - 1].density) * (s[k].omega_s - s[k - 1].omega_s);
  }
  return sum;
}

bool ratio_is(double a, double b, double expected) {
  return std::abs(a / b / expected - 1.0) < 1e-9;
}

}  // namespace

TEST_CASE("pump_amplitude_sq") {
  const double base = rt::pump_amplitude_sq(10e-3, 82e-6, 1.707);
  CHECK(base == doctest::Approx(417906821.2503755).epsilon(1e-12));
  CHECK(rt::pump_amplitude_sq(20e-3, 82e-6, 1.707) == doctest::Approx(2 * base).epsilon(1e-15));
  CHECK(rt::pump_amplitude_sq(10e-3, 164e-6, 1.707) == doctest::Approx(base / 4).epsilon(1e-15));
  CHECK_THROWS_AS(rt::pump_amplitude_sq(0.0, 82e-6, 1.707), spdc::Error);
  CHECK_THROWS_AS(rt::pump_amplitude_sq(1e-3, 82e-6, 0.5), spdc::Error);
}

TEST_CASE("config validation in the rates layer") {
  auto c = source();
  c.pump_power = 0.0;
  CHECK_THROWS_AS(c.validate(), spdc::Error);
  c = source();
  c.signal.lambda_vac = 700e-9;
  CHECK_THROWS_AS(c.validate(), spdc::Error);
  c = source();
  c.signal.waist = 60e-6;
  try {
    rt::total_rate(c, no_samples());
    FAIL("expected UnequalWaists");
  } catch (const spdc::Error& e) {
    CHECK(e.code() == spdc::ErrorCode::UnequalWaists);
    CHECK(std::string(e.what()).find("waist_scaling") != std::string::npos);
  }
  c = source();
  c.idler.n = c.signal.n;
  try {
    rt::total_rate(c, no_samples());
    FAIL("expected DegenerateDispersion");
  } catch (const spdc::Error& e) {
    CHECK(e.code() == spdc::ErrorCode::DegenerateDispersion);
  }
}

TEST_CASE("total_rate: scaling laws") {
  const auto opts = no_samples();
  const auto base = rt::total_rate(source(), opts);
  CHECK(base.R_T > 0.0);
  CHECK(base.S == doctest::Approx(pi).epsilon(1e-9));

  auto c = source();
  c.pump_power *= 2;
  CHECK(ratio_is(rt::total_rate(c, opts).R_T, base.R_T, 2.0));

  c = source();
  c.d_eff *= 2;
  CHECK(ratio_is(rt::total_rate(c, opts).R_T, base.R_T, 4.0));

  // Collinear, so Xi = 0 at any length: pure proportionality.
  CHECK(ratio_is(rt::total_rate(source(0.0, 82e-6, 4e-3), opts).R_T, base.R_T, 2.0));

  // pi W_p^2 doubled with all waists scaled together (fixed gamma).
  CHECK(ratio_is(rt::total_rate(source(0.0, 82e-6 * std::sqrt(2.0)), opts).R_T, base.R_T, 0.5));

  // Non-collinear: R_T follows l S(Xi(l)).
  const double th = 2.0 * kDeg;
  const auto a = rt::total_rate(source(th, 82e-6, 2e-3), opts);
  const auto b = rt::total_rate(source(th, 82e-6, 4e-3), opts);
  CHECK(b.Xi == doctest::Approx(2 * a.Xi).epsilon(1e-12));
  CHECK(ratio_is(b.R_T, a.R_T, 2.0 * b.S / a.S));
  CHECK(b.R_T < 2.0 * a.R_T);
}

TEST_CASE("total_rate: collinear emission beats non-collinear") {
  const double collinear = rt::total_rate(source(), no_samples()).R_T;
  for (int k = 1; k <= 10; ++k) {
    const double th = 0.5 * k * kDeg;
    CHECK(rt::total_rate(source(th), no_samples()).R_T < collinear);
  }
}

TEST_CASE("total_rate: report fields") {
  const auto r = rt::total_rate(source(3.1 * kDeg), no_samples());
  CHECK(r.Xi == doctest::Approx(0.9326706190257007).epsilon(1e-12));
  CHECK(r.S > 0.0);
  CHECK(r.S <= pi);
  CHECK_FALSE(r.R_T_thin.has_value());
  CHECK(r.efficiency_per_mm ==
        doctest::Approx(r.R_T * spdc::constants::hbar * source().omega_p() / (1e-3 * 2.0)).epsilon(1e-14));
  REQUIRE(r.efficiency_per_mm_sr.has_value());
  CHECK(*r.efficiency_per_mm_sr == doctest::Approx(r.efficiency_per_mm / 3.3e-5).epsilon(1e-14));
  CHECK(r.dispersion_difference < 0.0);
  CHECK_FALSE(r.warnings.empty());
  CHECK(rt::delta_k_z_at(source(3.1 * kDeg), r.omega_s_phase_matched) ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("thin crystal: closed forms") {
  const auto c = source();
  const auto thin = rt::thin_crystal_rates(c);
  auto c2 = c;
  c2.pump_power *= 2;
  CHECK(ratio_is(rt::thin_crystal_rates(c2).total, thin.total, 2.0));
  CHECK(ratio_is(rt::thin_crystal_rates(source(0.0, 82e-6, 4e-3)).total, thin.total, 2.0));
  CHECK_THROWS_AS(rt::thin_crystal_rates(source(0.01)), spdc::Error);

  // Prefactor of the total-rate closed form at S = pi and theta = 0.
  const auto report = rt::total_rate(c, no_samples());
  REQUIRE(report.R_T_thin.has_value());
  CHECK(std::abs(*report.R_T_thin / report.R_T - 1.0) < 1e-8);
}

TEST_CASE("thin crystal: density is the peak times sinc^2, zeros at m pi") {
  const auto c = source();
  const auto thin = rt::thin_crystal_rates(c);
  const double l = c.crystal.length;
  const double wpm = rt::phase_matched_omega_s(c);
  // delta_k_z(wpm + dw) = -slope dw
  const double slope = mat::dispersion_factor(c.signal.n, c.idler.n, 0.0, 0.0);
  for (int m = -6; m <= 6; ++m) {
    const double w = wpm - 2.0 * m * pi / (l * slope);
    const double ratio = thin.spectral_density(w) / thin.peak_density;
    if (m == 0) {
      CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
    } else {
      CHECK(ratio < 1e-20);
    }
  }
  for (int k = 0; k < 200; ++k) {
    const double w = wpm + (k - 100) * 0.05 / (l * std::abs(slope));
    const double x = rt::delta_k_z_at(c, w) * l / 2.0;
    const double s = spdc::numerics::sinc(x);
    CHECK(thin.spectral_density(w) / thin.peak_density == doctest::Approx(s * s).epsilon(1e-12));
    // The general density keeps the exact omega_s omega_i.
    const double wi = c.omega_p() - w;
    CHECK(rt::spectral_rate_density(c, w) / thin.spectral_density(w) ==
          doctest::Approx(4.0 * w * wi / (c.omega_p() * c.omega_p())).epsilon(1e-9));
  }
}

TEST_CASE("collinear limit of the non-collinear rate") {
  const auto thin = rt::thin_crystal_rates(source());
  for (double deg : {0.1, 0.05, 0.01}) {
    const auto r = rt::total_rate(source(deg * kDeg), no_samples());
    CHECK(std::abs(r.R_T / thin.total - 1.0) < 0.01);
  }
}

TEST_CASE("spectral samples integrate to the total rate") {
  for (double deg : {0.0, 1.0, 3.1}) {
    const auto r = rt::total_rate(source(deg * kDeg));
    REQUIRE(r.spectral_samples.size() == 4001);
    CHECK(std::abs(trapezoid(r.spectral_samples) / r.R_T - 1.0) < 0.05);
  }
}

TEST_CASE("waist_scaling") {
  const double w = 70e-6;
  CHECK(rt::waist_scaling(w, w, w) == doctest::Approx(1.0 / (9.0 * w * w)).epsilon(1e-14));
  const double a = 50e-6, b = 80e-6, c = 110e-6;
  const double v = rt::waist_scaling(a, b, c);
  for (double x : {rt::waist_scaling(a, c, b), rt::waist_scaling(b, a, c),
                   rt::waist_scaling(b, c, a), rt::waist_scaling(c, a, b),
                   rt::waist_scaling(c, b, a)}) {
    CHECK(x == doctest::Approx(v).epsilon(1e-14));
  }
  for (double gamma : {0.3, 0.7, 1.0, 2.2}) {
    CHECK(rt::waist_scaling(gamma * w, w, w) * w * w ==
          doctest::Approx(rt::gamma_rate_factor(gamma)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(rt::waist_scaling(0.0, w, w), spdc::Error);
}

TEST_CASE("gamma: optimum, 8/9 and the gamma -> 1/(2 gamma) symmetry") {
  const double g = rt::optimal_gamma();
  CHECK(std::abs(g - 1.0 / std::sqrt(2.0)) < 1e-6);

  // Brute-force scan, 10^6 points at 1e-6 spacing around the optimum.
  double best = 0.0;
  double best_value = -1.0;
  for (int k = 0; k < 1000000; ++k) {
    const double x = 0.2 + 1e-6 * k;
    const double v = rt::gamma_rate_factor(x);
    if (v > best_value) {
      best_value = v;
      best = x;
    }
  }
  CHECK(std::abs(g - best) < 1e-6);

  const double peak = rt::gamma_rate_factor(g);
  CHECK(rt::gamma_rate_factor(1.0) / peak == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(0.05, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = dist(rng);
    CHECK(rt::gamma_rate_factor(x) ==
          doctest::Approx(rt::gamma_rate_factor(1.0 / (2.0 * x))).epsilon(1e-13));
  }
}

TEST_CASE("gamma_sweep") {
  const auto curve = rt::gamma_sweep(0.1, 3.0, 581);
  REQUIRE(curve.size() == 581);
  CHECK(curve.front().gamma == 0.1);
  CHECK(curve.back().gamma == doctest::Approx(3.0).epsilon(1e-15));
  double max_value = 0.0;
  std::size_t argmax = 0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    CHECK(curve[k].relative_rate <= 1.0 + 1e-15);
    if (curve[k].relative_rate > max_value) {
      max_value = curve[k].relative_rate;
      argmax = k;
    }
  }
  for (std::size_t k = 1; k < curve.size(); ++k) {
    if (k <= argmax) {
      CHECK(curve[k].relative_rate > curve[k - 1].relative_rate);
    } else {
      CHECK(curve[k].relative_rate < curve[k - 1].relative_rate);
    }
  }
  const auto two = rt::gamma_sweep(0.2, 2.5, 2);
  CHECK(two[0].relative_rate == doctest::Approx(two[1].relative_rate).epsilon(1e-13));
  const auto unit = rt::gamma_sweep(1.0, 2.0, 2);
  CHECK(unit[0].relative_rate == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(rt::gamma_sweep(0.0, 1.0, 10), spdc::Error);
  CHECK_THROWS_AS(rt::gamma_sweep(1.0, 2.0, 1), spdc::Error);
}

TEST_CASE("compare_experiment") {
  auto c = source(3.1 * kDeg);
  CHECK_THROWS_AS(rt::compare_experiment(c, no_samples()), spdc::Error);
  c.experiment.pair_to_singles_ratio = 0.23;
  c.experiment.decay_paths = 2;
  const auto cmp = rt::compare_experiment(c, no_samples());
  CHECK(cmp.rate_per_mw == doctest::Approx(cmp.report.R_T).epsilon(1e-14));
  CHECK(cmp.observable_rate_per_mw == doctest::Approx(0.46 * cmp.rate_per_mw).epsilon(1e-14));
}
