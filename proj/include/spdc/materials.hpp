#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spdc::materials {

// Dispersion models, wavelength in micrometres:
//   quadratic_pole: n^2 = A + B/(L^2 - C) - D L^2          (4 coefficients)
//   sellmeier:      n^2 = 1 + sum_k B_k L^2/(L^2 - C_k)     (pairs B_k, C_k)
enum class SellmeierForm { QuadraticPole, Sellmeier };

std::string_view to_string(SellmeierForm form) noexcept;
SellmeierForm parse_sellmeier_form(std::string_view name);

/// One polarization branch of a uniaxial crystal.
struct SellmeierSet {
  SellmeierForm form = SellmeierForm::QuadraticPole;
  std::vector<double> coefficients;
  double lambda_min = 0.0;  // m
  double lambda_max = 0.0;  // m

  /// n^2 at a vacuum wavelength in metres; OutOfRange outside the window.
  double n_squared(double lambda_vac) const;
  double index(double lambda_vac) const;
  void validate(std::string_view label) const;
};

struct Material {
  std::string name;
  SellmeierSet ordinary;
  SellmeierSet extraordinary;
  double d22 = 0.0;  // m/V
  std::string source_citation;
};

struct CrystalSpec {
  std::string name;
  SellmeierSet ordinary;
  SellmeierSet extraordinary;
  double d22 = 0.0;       // m/V
  double length = 0.0;    // m
  double theta_c = 0.0;   // rad, pump wave vector to optic axis
  double phi_c = 0.0;     // rad, azimuth

  static CrystalSpec from_material(const Material& material, double length,
                                   double theta_c, double phi_c);
  void validate() const;
};

/// Material records loaded from the JSON material database.
class MaterialDatabase {
 public:
  static MaterialDatabase load(const std::filesystem::path& path);
  static MaterialDatabase parse(std::string_view json_text,
                                std::string_view origin = "<memory>");

  const Material& find(std::string_view name) const;
  const std::vector<Material>& materials() const noexcept { return materials_; }
  int version() const noexcept { return version_; }

 private:
  std::vector<Material> materials_;
  int version_ = 0;
};

double index_ordinary(const CrystalSpec& crystal, double lambda_vac);
double index_principal_extraordinary(const CrystalSpec& crystal,
                                     double lambda_vac);

/// Index-ellipse extraordinary index for propagation at theta to the optic
/// axis: 1/n^2 = cos^2/n_o^2 + sin^2/n_e^2.
double index_extraordinary(const CrystalSpec& crystal, double lambda_vac,
                           double theta);

/// d = d22 cos^2(theta_c) cos(3 phi_c), signed.
double effective_nonlinearity_bbo(const CrystalSpec& crystal);

/// Snell refraction at a face normal to the pump: sin(ext) = n sin(int).
double internal_angle(double theta_external, double n_inside);
double external_angle(double theta_internal, double n_inside);

struct WaveTriplet {
  double n_s = 1.0;
  double n_i = 1.0;
  double n_p = 1.0;
  double omega_s = 0.0;  // rad/s
  double omega_i = 0.0;
  double omega_p = 0.0;
  double theta_s = 0.0;  // rad, internal
  double theta_i = 0.0;
};

/// Longitudinal mismatch (n_s w_s cos th_s + n_i w_i cos th_i - n_p w_p)/c
/// in 1/m. EnergyMismatch when w_p != w_s + w_i beyond 1e-12 relative.
double delta_k_z(const WaveTriplet& waves);

inline constexpr double kDefaultDegeneracyEpsilon = 1e-6;

/// d(delta k_z)/d(omega_s) = (n_i cos th_i - n_s cos th_s)/c, sign kept.
/// DegenerateDispersion when the index difference is below epsilon.
double dispersion_factor(double n_s, double n_i, double theta_s,
                         double theta_i,
                         double epsilon = kDefaultDegeneracyEpsilon);

}  // namespace spdc::materials
