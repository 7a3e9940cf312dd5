#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spdc/materials.hpp"
#include "spdc/modes.hpp"

namespace spdc::rates {

enum class AngleConvention {
  InternalPhysics,          // external angle refracted into the crystal
  ExternalAsInternal,  // external angle used unchanged as internal angle
};

enum class PolarizationAssignment { SignalOrdinary, SignalExtraordinary };
enum class Polarization { Ordinary, Extraordinary };

std::string_view to_string(AngleConvention v) noexcept;
std::string_view to_string(PolarizationAssignment v) noexcept;
std::string_view to_string(Polarization v) noexcept;

/// Experiment-specific numbers used only when comparing with a measurement.
struct ExperimentInfo {
  std::optional<double> pair_to_singles_ratio;
  int decay_paths = 2;
  std::optional<double> observed_rate_per_mw;
  // Reference values to print next to the model, keyed by quantity name.
  std::vector<std::pair<std::string, double>> reference;
};

/// A fully resolved source: indices and internal angles are already filled
/// into the three modes, all quantities SI.
struct SourceConfig {
  std::string name;
  std::string material;
  double pump_power = 0.0;  // W
  modes::GaussianMode pump{.role = modes::Role::Pump};
  modes::GaussianMode signal{.role = modes::Role::Signal};
  modes::GaussianMode idler{.role = modes::Role::Idler};
  materials::CrystalSpec crystal;
  double d_eff = 0.0;                      // m/V, signed
  double external_collection_angle = 0.0;  // rad
  AngleConvention angle_convention = AngleConvention::InternalPhysics;
  PolarizationAssignment polarization_assignment =
      PolarizationAssignment::SignalOrdinary;
  Polarization pump_polarization = Polarization::Extraordinary;
  std::optional<double> solid_angle;  // sr
  double degeneracy_epsilon = materials::kDefaultDegeneracyEpsilon;
  ExperimentInfo experiment;

  double omega_p() const;
  void validate() const;
};

struct SpectralSample {
  double omega_s = 0.0;  // rad/s
  double density = 0.0;  // pairs/s per rad/s
};

struct RateReport {
  double Xi = 0.0;
  double S = 0.0;
  double R_T = 0.0;                   // pairs/s
  std::optional<double> R_T_thin;     // pairs/s, collinear geometries only
  std::vector<SpectralSample> spectral_samples;
  double efficiency_per_mm = 0.0;     // pairs per pump photon per mm
  std::optional<double> efficiency_per_mm_sr;
  std::vector<std::string> warnings;

  // Intermediate quantities, reported for traceability.
  double d_eff = 0.0;
  double n_p = 0.0;
  double n_s = 0.0;
  double n_i = 0.0;
  double theta_s = 0.0;
  double theta_i = 0.0;
  double dispersion_difference = 0.0;  // n_i cos th_i - n_s cos th_s
  double delta_k_z_degenerate = 0.0;   // 1/m at omega_s = omega_p/2
  double omega_s_phase_matched = 0.0;  // rad/s where delta_k_z = 0
};

struct RateOptions {
  // Spectral density samples over |delta_phi| <= spectral_half_range around
  // the phase-matched frequency. Zero points skips the sampling.
  std::size_t spectral_points = 4001;
  double spectral_half_range = 200.0;
};

/// |E_p^0|^2 = alpha_p^2 * 2P/(eps0 n_p c), V^2/m^2.
double pump_amplitude_sq(double power, double pump_waist, double n_p);

/// delta_k_z as a function of the signal frequency, indices held fixed.
double delta_k_z_at(const SourceConfig& config, double omega_s);

/// Signal frequency where delta_k_z vanishes (linear in omega_s).
double phase_matched_omega_s(const SourceConfig& config);

/// dR/d(omega_s) in pairs/s per rad/s, perfect transverse phase matching.
double spectral_rate_density(const SourceConfig& config, double omega_s);

/// Total pair rate for equal waists, integrated over the spectrum with the
/// dispersion linearised about degeneracy.
RateReport total_rate(const SourceConfig& config,
                      const RateOptions& options = {});

struct ThinCrystalRates {
  std::function<double(double)> spectral_density;  // of omega_s
  double peak_density = 0.0;
  double total = 0.0;
};

/// Closed forms for the collinear, thin-crystal case.
ThinCrystalRates thin_crystal_rates(const SourceConfig& config);

/// 1/(Wp^2 Ws^2 Wi^2 (1/Wp^2 + 1/Ws^2 + 1/Wi^2)^2).
double waist_scaling(double pump_waist, double signal_waist,
                     double idler_waist);

/// Rate factor 1/(1/gamma + 2 gamma)^2 for Ws = Wi = W, Wp = gamma W.
double gamma_rate_factor(double gamma);

/// Golden-section maximiser of gamma_rate_factor on [0.05, 5].
double optimal_gamma();

struct GammaPoint {
  double gamma = 0.0;
  double relative_rate = 0.0;
};

/// Uniform gamma grid, normalised by the rate at the optimum.
std::vector<GammaPoint> gamma_sweep(double gamma_min, double gamma_max,
                                    std::size_t points);

struct ExperimentComparison {
  RateReport report;
  double rate_per_mw = 0.0;        // R_T per mW of pump
  double observable_rate_per_mw = 0.0;  // decay_paths * ratio * R_T per mW
  std::vector<std::string> warnings;
};

ExperimentComparison compare_experiment(const SourceConfig& config,
                                        const RateOptions& options = {});

}  // namespace spdc::rates
