#include "spdc/materials.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "spdc/constants.hpp"
#include "spdc/errors.hpp"

namespace spdc::materials {
namespace {

using nlohmann::json;

[[noreturn]] void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ErrorCode::ValidationError, where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) {
    fail(ErrorCode::ValidationError,
         where + "." + key + ": expected a number");
  }
  return v.get<double>();
}

SellmeierSet parse_branch(const json& node, const std::string& where) {
  SellmeierSet set;
  const json& form = require(node, "form", where);
  if (!form.is_string()) {
    fail(ErrorCode::ValidationError, where + ".form: expected a string");
  }
  set.form = parse_sellmeier_form(form.get<std::string>());

  const json& coeffs = require(node, "coefficients", where);
  if (!coeffs.is_array()) {
    fail(ErrorCode::ValidationError, where + ".coefficients: expected an array");
  }
  for (const json& c : coeffs) {
    if (!c.is_number()) {
      fail(ErrorCode::ValidationError,
           where + ".coefficients: expected numbers only");
    }
    set.coefficients.push_back(c.get<double>());
  }

  const json& range = require(node, "range_um", where);
  if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
      !range[1].is_number()) {
    fail(ErrorCode::ValidationError,
         where + ".range_um: expected [min, max] in micrometres");
  }
  set.lambda_min = range[0].get<double>() * 1e-6;
  set.lambda_max = range[1].get<double>() * 1e-6;
  set.validate(where);
  return set;
}

}  // namespace

std::string_view to_string(SellmeierForm form) noexcept {
  switch (form) {
    case SellmeierForm::QuadraticPole: return "quadratic_pole";
    case SellmeierForm::Sellmeier: return "sellmeier";
  }
  return "unknown";
}

SellmeierForm parse_sellmeier_form(std::string_view name) {
  if (name == "quadratic_pole") return SellmeierForm::QuadraticPole;
  if (name == "sellmeier") return SellmeierForm::Sellmeier;
  throw Error(ErrorCode::ValidationError,
              "unknown dispersion form '" + std::string(name) +
                  "' (allowed: quadratic_pole, sellmeier)");
}

double SellmeierSet::n_squared(double lambda_vac) const {
  if (!(lambda_vac >= lambda_min && lambda_vac <= lambda_max)) {
    std::ostringstream msg;
    msg << "wavelength " << lambda_vac * 1e9 << " nm outside the dispersion "
        << "model range [" << lambda_min * 1e9 << ", " << lambda_max * 1e9
        << "] nm";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  const double l2 = std::pow(lambda_vac * 1e6, 2);
  const auto& k = coefficients;
  switch (form) {
    case SellmeierForm::QuadraticPole:
      return k[0] + k[1] / (l2 - k[2]) - k[3] * l2;
    case SellmeierForm::Sellmeier: {
      double n2 = 1.0;
      for (std::size_t j = 0; j + 1 < k.size(); j += 2) {
        n2 += k[j] * l2 / (l2 - k[j + 1]);
      }
      return n2;
    }
  }
  return 1.0;
}

double SellmeierSet::index(double lambda_vac) const {
  return std::sqrt(n_squared(lambda_vac));
}

void SellmeierSet::validate(std::string_view label) const {
  const std::string where(label);
  const bool count_ok =
      form == SellmeierForm::QuadraticPole
          ? coefficients.size() == 4
          : (!coefficients.empty() && coefficients.size() % 2 == 0);
  if (!count_ok) {
    fail(ErrorCode::ValidationError,
         where + ": wrong number of coefficients for form " +
             std::string(to_string(form)));
  }
  if (!(lambda_min > 0.0 && lambda_max > lambda_min)) {
    fail(ErrorCode::ValidationError, where + ": invalid wavelength range");
  }
  // n^2 > 1 across the validity window, checked on a dense grid.
  constexpr int samples = 257;
  for (int j = 0; j < samples; ++j) {
    const double lambda =
        lambda_min + (lambda_max - lambda_min) * j / (samples - 1.0);
    const double n2 = n_squared(lambda);
    if (!(n2 > 1.0) || !std::isfinite(n2)) {
      fail(ErrorCode::ValidationError,
           where + ": n^2 <= 1 inside the stated wavelength range");
    }
  }
}

CrystalSpec CrystalSpec::from_material(const Material& material, double length,
                                       double theta_c, double phi_c) {
  CrystalSpec c;
  c.name = material.name;
  c.ordinary = material.ordinary;
  c.extraordinary = material.extraordinary;
  c.d22 = material.d22;
  c.length = length;
  c.theta_c = theta_c;
  c.phi_c = phi_c;
  c.validate();
  return c;
}

void CrystalSpec::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    fail(ErrorCode::ValidationError, "crystal.length_mm must be > 0");
  }
  if (!(theta_c >= 0.0 && theta_c <= std::numbers::pi / 2)) {
    fail(ErrorCode::ValidationError,
         "crystal.theta_c_deg must lie in [0, 90]");
  }
  if (!(phi_c >= 0.0 && phi_c < 2.0 * std::numbers::pi)) {
    fail(ErrorCode::ValidationError, "crystal.phi_c_deg must lie in [0, 360)");
  }
}

MaterialDatabase MaterialDatabase::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError,
                "cannot open material database '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

MaterialDatabase MaterialDatabase::parse(std::string_view json_text,
                                         std::string_view origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                std::string(origin) + ": " + e.what());
  }
  const std::string root(origin);
  MaterialDatabase db;
  db.version_ = static_cast<int>(require_number(doc, "version", root));
  const json& list = require(doc, "materials", root);
  if (!list.is_array()) {
    fail(ErrorCode::ValidationError, root + ".materials: expected an array");
  }
  for (std::size_t j = 0; j < list.size(); ++j) {
    const json& node = list[j];
    const std::string where = root + ".materials[" + std::to_string(j) + "]";
    Material m;
    const json& name = require(node, "name", where);
    if (!name.is_string()) {
      fail(ErrorCode::ValidationError, where + ".name: expected a string");
    }
    m.name = name.get<std::string>();
    m.ordinary = parse_branch(require(node, "ordinary", where), where + ".ordinary");
    m.extraordinary =
        parse_branch(require(node, "extraordinary", where), where + ".extraordinary");
    m.d22 = require_number(node, "d22_m_per_V", where);
    if (node.contains("source_citation") && node["source_citation"].is_string()) {
      m.source_citation = node["source_citation"].get<std::string>();
    }
    db.materials_.push_back(std::move(m));
  }
  return db;
}

const Material& MaterialDatabase::find(std::string_view name) const {
  for (const Material& m : materials_) {
    if (m.name == name) return m;
  }
  std::string known;
  for (const Material& m : materials_) {
    known += (known.empty() ? "" : ", ") + m.name;
  }
  throw Error(ErrorCode::UnknownMaterial,
              "material '" + std::string(name) +
                  "' not in database (known: " + known + ")");
}

double index_ordinary(const CrystalSpec& crystal, double lambda_vac) {
  return crystal.ordinary.index(lambda_vac);
}

double index_principal_extraordinary(const CrystalSpec& crystal,
                                     double lambda_vac) {
  return crystal.extraordinary.index(lambda_vac);
}

double index_extraordinary(const CrystalSpec& crystal, double lambda_vac,
                           double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw Error(ErrorCode::OutOfRange,
                "propagation angle to the optic axis must lie in [0, pi/2]");
  }
  const double no2 = crystal.ordinary.n_squared(lambda_vac);
  const double ne2 = crystal.extraordinary.n_squared(lambda_vac);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / no2 + s * s / ne2);
}

double effective_nonlinearity_bbo(const CrystalSpec& crystal) {
  const double c = std::cos(crystal.theta_c);
  return crystal.d22 * c * c * std::cos(3.0 * crystal.phi_c);
}

double internal_angle(double theta_external, double n_inside) {
  if (!(n_inside >= 1.0)) {
    throw Error(ErrorCode::ValidationError, "refractive index must be >= 1");
  }
  if (!(std::abs(theta_external) < std::numbers::pi / 2)) {
    throw Error(ErrorCode::ValidationError,
                "external angle must lie in (-90, 90) degrees");
  }
  return std::asin(std::sin(theta_external) / n_inside);
}

double external_angle(double theta_internal, double n_inside) {
  if (!(n_inside >= 1.0)) {
    throw Error(ErrorCode::ValidationError, "refractive index must be >= 1");
  }
  const double s = n_inside * std::sin(theta_internal);
  if (std::abs(s) > 1.0) {
    throw Error(ErrorCode::ValidationError,
                "internal angle beyond the critical angle");
  }
  return std::asin(s);
}

double delta_k_z(const WaveTriplet& w) {
  if (std::abs(w.omega_p - w.omega_s - w.omega_i) > 1e-12 * std::abs(w.omega_p)) {
    std::ostringstream msg;
    msg << "energy conservation violated: omega_p - omega_s - omega_i = "
        << (w.omega_p - w.omega_s - w.omega_i) << " rad/s";
    throw Error(ErrorCode::EnergyMismatch, msg.str());
  }
  return (w.n_s * w.omega_s * std::cos(w.theta_s) +
          w.n_i * w.omega_i * std::cos(w.theta_i) - w.n_p * w.omega_p) /
         constants::c;
}

double dispersion_factor(double n_s, double n_i, double theta_s,
                         double theta_i, double epsilon) {
  const double diff = n_i * std::cos(theta_i) - n_s * std::cos(theta_s);
  if (std::abs(diff) < epsilon) {
    std::ostringstream msg;
    msg << "index difference n_i cos(theta_i) - n_s cos(theta_s) = " << diff
        << " below " << epsilon
        << "; the linearised spectral integration is not valid";
    throw Error(ErrorCode::DegenerateDispersion, msg.str());
  }
  return diff / constants::c;
}

}  // namespace spdc::materials
