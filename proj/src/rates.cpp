#include "spdc/rates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"

namespace spdc::rates {
namespace {

using constants::c;
using constants::epsilon0;
using std::numbers::pi;

constexpr double kWaistRelTol = 1e-9;

bool same(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

void require_equal_waists(const SourceConfig& config) {
  const double wp = config.pump.waist;
  if (!same(wp, config.signal.waist, kWaistRelTol) ||
      !same(wp, config.idler.waist, kWaistRelTol)) {
    std::ostringstream msg;
    msg << "closed-form rate needs W_p = W_s = W_i (got " << wp * 1e6 << ", "
        << config.signal.waist * 1e6 << ", " << config.idler.waist * 1e6
        << " um); use waist_scaling for the general dependence";
    throw Error(ErrorCode::UnequalWaists, msg.str());
  }
}

double omega_of(double lambda_vac) { return 2.0 * pi * c / lambda_vac; }

std::string format_percent(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v * 100.0 << "%";
  return s.str();
}

}  // namespace

std::string_view to_string(AngleConvention v) noexcept {
  return v == AngleConvention::InternalPhysics ? "internal" : "external";
}

std::string_view to_string(PolarizationAssignment v) noexcept {
  return v == PolarizationAssignment::SignalOrdinary ? "signal_ordinary"
                                                     : "signal_extraordinary";
}

std::string_view to_string(Polarization v) noexcept {
  return v == Polarization::Ordinary ? "ordinary" : "extraordinary";
}

double SourceConfig::omega_p() const { return omega_of(pump.lambda_vac); }

void SourceConfig::validate() const {
  if (!(pump_power > 0.0) || !std::isfinite(pump_power)) {
    throw Error(ErrorCode::ValidationError, "pump.power_mw must be > 0");
  }
  pump.validate();
  signal.validate();
  idler.validate();
  crystal.validate();
  const double degenerate = 2.0 * pump.lambda_vac;
  if (!same(signal.lambda_vac, degenerate, 1e-9) ||
      !same(idler.lambda_vac, degenerate, 1e-9)) {
    throw Error(ErrorCode::ValidationError,
                "signal and idler wavelengths must equal twice the pump "
                "wavelength (degenerate operation)");
  }
  if (solid_angle && !(*solid_angle > 0.0)) {
    throw Error(ErrorCode::ValidationError,
                "collection.solid_angle_sr must be > 0");
  }
}

double pump_amplitude_sq(double power, double pump_waist, double n_p) {
  if (!(power > 0.0) || !(n_p >= 1.0)) {
    throw Error(ErrorCode::ValidationError,
                "pump amplitude needs P > 0 and n_p >= 1");
  }
  const double alpha = modes::normalization_alpha(pump_waist);
  return alpha * alpha * 2.0 * power / (epsilon0 * n_p * c);
}

double delta_k_z_at(const SourceConfig& config, double omega_s) {
  const double omega_p = config.omega_p();
  materials::WaveTriplet w;
  w.n_s = config.signal.n;
  w.n_i = config.idler.n;
  w.n_p = config.pump.n;
  w.omega_p = omega_p;
  w.omega_s = omega_s;
  w.omega_i = omega_p - omega_s;
  w.theta_s = config.signal.theta;
  w.theta_i = config.idler.theta;
  return materials::delta_k_z(w);
}

double phase_matched_omega_s(const SourceConfig& config) {
  const double slope = materials::dispersion_factor(
      config.signal.n, config.idler.n, config.signal.theta, config.idler.theta,
      config.degeneracy_epsilon);
  // delta_k_z(w_s) = delta_k_z(w_p/2) - slope (w_s - w_p/2)
  const double half = 0.5 * config.omega_p();
  return half + delta_k_z_at(config, half) / slope;
}

double spectral_rate_density(const SourceConfig& config, double omega_s) {
  const double omega_p = config.omega_p();
  if (!(omega_s > 0.0 && omega_s < omega_p)) {
    throw Error(ErrorCode::ValidationError,
                "omega_s must lie strictly between 0 and omega_p");
  }
  const double omega_i = omega_p - omega_s;
  const double l = config.crystal.length;
  const double dkz = delta_k_z_at(config, omega_s);
  const auto geometry = modes::geometry_coefficients(config.pump, config.signal,
                                                     config.idler, l);
  const double overlap = modes::overlap_phi(geometry, 0.0, dkz, l);
  const double alpha_s = modes::normalization_alpha(config.signal.waist);
  const double alpha_i = modes::normalization_alpha(config.idler.waist);
  const double e2 =
      pump_amplitude_sq(config.pump_power, config.pump.waist, config.pump.n);
  const double amp = config.d_eff * alpha_s * alpha_i * overlap / c;
  return amp * amp * e2 * omega_s * omega_i /
         (2.0 * pi * config.signal.n * config.idler.n);
}

RateReport total_rate(const SourceConfig& config, const RateOptions& options) {
  config.validate();
  require_equal_waists(config);

  RateReport r;
  const double l = config.crystal.length;
  const double omega_p = config.omega_p();
  const double n_p = config.pump.n;
  const double n_s = config.signal.n;
  const double n_i = config.idler.n;
  const double th_s = config.signal.theta;
  const double th_i = config.idler.theta;
  const double w = config.pump.waist;
  const double d = config.d_eff;

  const auto geometry =
      modes::geometry_coefficients(config.pump, config.signal, config.idler, l);
  r.Xi = geometry.Xi;
  r.S = modes::spectral_integral_S(r.Xi);

  const double slope =
      materials::dispersion_factor(n_s, n_i, th_s, th_i, config.degeneracy_epsilon);
  r.dispersion_difference = slope * c;
  if (r.dispersion_difference < 0.0) {
    r.warnings.push_back(
        "n_i cos(theta_i) - n_s cos(theta_s) is negative; its magnitude is "
        "used (the sign only reflects the signal/idler labelling)");
  }

  const double cs = std::cos(th_s);
  const double ci = std::cos(th_i);
  r.R_T = 4.0 * d * d * config.pump_power * l * omega_p * omega_p /
          (3.0 * pi * n_p * n_s * n_i * epsilon0 * c * c * (pi * w * w) *
           (1.0 + ci * ci + cs * cs)) /
          std::abs(r.dispersion_difference) * r.S;

  if (!same(th_s, th_i, 1e-12)) {
    std::ostringstream msg;
    msg << "signal and idler internal angles differ (" << th_s * 180.0 / pi
        << " vs " << th_i * 180.0 / pi
        << " deg); the closed form assumes equal collection angles";
    r.warnings.push_back(msg.str());
  }

  if (th_s == 0.0 && th_i == 0.0) {
    r.R_T_thin = thin_crystal_rates(config).total;
  }

  const double photon_energy = constants::hbar * omega_p;
  r.efficiency_per_mm = r.R_T * photon_energy / (config.pump_power * l * 1e3);
  if (config.solid_angle) {
    r.efficiency_per_mm_sr = r.efficiency_per_mm / *config.solid_angle;
  }

  r.d_eff = d;
  r.n_p = n_p;
  r.n_s = n_s;
  r.n_i = n_i;
  r.theta_s = th_s;
  r.theta_i = th_i;
  r.delta_k_z_degenerate = delta_k_z_at(config, 0.5 * omega_p);
  r.omega_s_phase_matched = phase_matched_omega_s(config);

  const double detuning =
      (r.omega_s_phase_matched - 0.5 * omega_p) / (0.5 * omega_p);
  if (std::abs(detuning) > 0.01) {
    r.warnings.push_back(
        "delta_k_z vanishes " + format_percent(detuning) +
        " away from the degenerate signal frequency; the rate is integrated "
        "about that point with indices held at their degenerate values");
  }

  if (options.spectral_points >= 2) {
    // delta_phi = -slope (w_s - w_pm) l/2, so a delta_phi step maps to a
    // fixed frequency step.
    const double half_width =
        options.spectral_half_range * 2.0 / (l * std::abs(slope));
    const double lo = std::max(r.omega_s_phase_matched - half_width, 1e-9 * omega_p);
    const double hi =
        std::min(r.omega_s_phase_matched + half_width, omega_p * (1.0 - 1e-9));
    r.spectral_samples.reserve(options.spectral_points);
    for (std::size_t k = 0; k < options.spectral_points; ++k) {
      const double omega_s =
          lo + (hi - lo) * static_cast<double>(k) /
                   static_cast<double>(options.spectral_points - 1);
      r.spectral_samples.push_back(
          {omega_s, spectral_rate_density(config, omega_s)});
    }
  }
  return r;
}

ThinCrystalRates thin_crystal_rates(const SourceConfig& config) {
  config.validate();
  if (config.signal.theta != 0.0 || config.idler.theta != 0.0) {
    throw Error(ErrorCode::ValidationError,
                "thin-crystal closed forms require collinear geometry "
                "(theta_s = theta_i = 0)");
  }
  require_equal_waists(config);
  const double n_p = config.pump.n;
  const double n_s = config.signal.n;
  const double n_i = config.idler.n;
  const double diff =
      materials::dispersion_factor(n_s, n_i, 0.0, 0.0, config.degeneracy_epsilon) * c;
  const double l = config.crystal.length;
  const double w = config.pump.waist;
  const double d = config.d_eff;
  const double omega_p = config.omega_p();
  const double power = config.pump_power;

  ThinCrystalRates out;
  out.peak_density = 2.0 * d * d * omega_p * omega_p * power * l * l /
                     (9.0 * pi * n_p * n_s * n_i * epsilon0 * c * c * c * (pi * w * w));
  out.total = 4.0 * d * d * power * l * omega_p * omega_p /
              (9.0 * n_s * n_i * n_p * epsilon0 * pi * w * w * std::abs(diff) * c * c);
  const double peak = out.peak_density;
  out.spectral_density = [config, peak, l](double omega_s) {
    const double s = numerics::sinc(delta_k_z_at(config, omega_s) * l / 2.0);
    return peak * s * s;
  };
  return out;
}

double waist_scaling(double pump_waist, double signal_waist,
                     double idler_waist) {
  if (!(pump_waist > 0.0 && signal_waist > 0.0 && idler_waist > 0.0)) {
    throw Error(ErrorCode::ValidationError, "waists must be > 0");
  }
  const double p = pump_waist * pump_waist;
  const double s = signal_waist * signal_waist;
  const double i = idler_waist * idler_waist;
  const double sum = 1.0 / p + 1.0 / s + 1.0 / i;
  return 1.0 / (p * s * i * sum * sum);
}

double gamma_rate_factor(double gamma) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::ValidationError, "gamma must be > 0");
  }
  const double g = 1.0 / gamma + 2.0 * gamma;
  return 1.0 / (g * g);
}

double optimal_gamma() {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.05;
  double b = 5.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = gamma_rate_factor(x1);
  double f2 = gamma_rate_factor(x2);
  while (b - a > 1e-9) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = gamma_rate_factor(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = gamma_rate_factor(x2);
    }
  }
  return 0.5 * (a + b);
}

std::vector<GammaPoint> gamma_sweep(double gamma_min, double gamma_max,
                                    std::size_t points) {
  if (!(gamma_min > 0.0 && gamma_max > gamma_min) || points < 2) {
    throw Error(ErrorCode::ValidationError,
                "gamma sweep needs 0 < gamma_min < gamma_max and >= 2 points");
  }
  const double peak = gamma_rate_factor(optimal_gamma());
  std::vector<GammaPoint> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double gamma =
        gamma_min + (gamma_max - gamma_min) * static_cast<double>(k) /
                        static_cast<double>(points - 1);
    out.push_back({gamma, gamma_rate_factor(gamma) / peak});
  }
  return out;
}

ExperimentComparison compare_experiment(const SourceConfig& config,
                                        const RateOptions& options) {
  if (!config.experiment.pair_to_singles_ratio) {
    throw Error(ErrorCode::ValidationError,
                "experiment.pair_to_singles_ratio is required for the "
                "experiment comparison");
  }
  ExperimentComparison out;
  out.report = total_rate(config, options);
  const double power_mw = config.pump_power * 1e3;
  out.rate_per_mw = out.report.R_T / power_mw;
  out.observable_rate_per_mw = config.experiment.decay_paths *
                               *config.experiment.pair_to_singles_ratio *
                               out.rate_per_mw;
  out.warnings = out.report.warnings;
  if (config.angle_convention == AngleConvention::InternalPhysics) {
    out.warnings.push_back(
        "collection angle refracted into the crystal (Snell); Xi is smaller "
        "than with the external angle taken directly as the internal angle "
        "(--angle-convention external)");
  }
  return out;
}

}  // namespace spdc::rates
