#include "spdc/modes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc::modes {
namespace {

constexpr double kNegativeHLimit = -1e-18;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::ValidationError, std::string(what) + " must be > 0");
  }
}

}  // namespace

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Pump: return "pump";
    case Role::Signal: return "signal";
    case Role::Idler: return "idler";
  }
  return "unknown";
}

void GaussianMode::validate() const {
  const std::string name(to_string(role));
  require_positive(waist, (name + ".waist").c_str());
  require_positive(lambda_vac, (name + ".wavelength").c_str());
  if (!(n >= 1.0)) {
    throw Error(ErrorCode::ValidationError, name + ".n must be >= 1");
  }
  if (role == Role::Pump && theta != 0.0) {
    throw Error(ErrorCode::ValidationError,
                "pump.theta must be 0: the pump defines the z axis");
  }
  if (!(std::abs(theta) < std::numbers::pi / 2)) {
    throw Error(ErrorCode::ValidationError, name + ".theta out of range");
  }
}

double normalization_alpha(double waist) {
  require_positive(waist, "waist");
  return std::sqrt(2.0 / (std::numbers::pi * waist * waist));
}

double confinement_correction(double waist, double lambda_vac, double n) {
  require_positive(waist, "waist");
  require_positive(lambda_vac, "wavelength");
  const double kw = 2.0 * std::numbers::pi * n / lambda_vac * waist;
  const double x = 2.0 / (kw * kw);
  // sqrt(1+x) - 1 without cancellation.
  return x / (std::sqrt(1.0 + x) + 1.0);
}

OverlapGeometry geometry_coefficients(const GaussianMode& pump,
                                      const GaussianMode& signal,
                                      const GaussianMode& idler,
                                      double crystal_length) {
  if (pump.role != Role::Pump || signal.role != Role::Signal ||
      idler.role != Role::Idler) {
    throw Error(ErrorCode::ValidationError,
                "geometry_coefficients expects pump, signal, idler in order");
  }
  pump.validate();
  signal.validate();
  idler.validate();
  require_positive(crystal_length, "crystal length");

  const double ip = 1.0 / (pump.waist * pump.waist);
  const double is = 1.0 / (signal.waist * signal.waist);
  const double ii = 1.0 / (idler.waist * idler.waist);
  const double cs = std::cos(signal.theta);
  const double ci = std::cos(idler.theta);
  const double ss = std::sin(signal.theta);
  const double si = std::sin(idler.theta);

  OverlapGeometry g;
  g.A = ip + is + ii;
  g.C = ip + cs * cs * is + ci * ci * ii;
  g.D = std::sin(2.0 * signal.theta) * is - std::sin(2.0 * idler.theta) * ii;
  g.F = ss * ss * is + si * si * ii;
  double h = g.F - g.D * g.D / (4.0 * g.C);
  if (h < 0.0) {
    if (h < kNegativeHLimit) {
      std::ostringstream msg;
      msg << "H = F - D^2/4C = " << h << " 1/m^2 is negative beyond rounding";
      throw Error(ErrorCode::NegativeH, msg.str());
    }
    h = 0.0;
  }
  g.H = h;
  g.Xi = std::sqrt(h) * crystal_length / 2.0;
  return g;
}

OverlapGeometry with_mismatch(OverlapGeometry geometry, double delta_k_y,
                              double delta_k_z, double crystal_length) {
  geometry.K = delta_k_z - delta_k_y * geometry.D / (2.0 * geometry.C);
  geometry.Xi = std::sqrt(geometry.H) * crystal_length / 2.0;
  geometry.delta_phi = geometry.K * crystal_length / 2.0;
  return geometry;
}

double phi_z(double xi, double delta_phi) {
  if (!(xi >= 0.0) || !std::isfinite(xi) || !std::isfinite(delta_phi)) {
    throw Error(ErrorCode::ValidationError,
                "phi_z requires finite Xi >= 0 and finite delta_phi");
  }
  const double xi2 = xi * xi;
  numerics::FiniteOptions options;
  // One starting piece per half period of the cosine.
  options.initial_subdivisions =
      1 + static_cast<std::size_t>(std::abs(delta_phi) / std::numbers::pi);
  const auto integrand = [xi2, delta_phi](double u) {
    return std::exp(-xi2 * u * u) * std::cos(delta_phi * u);
  };
  return numerics::integrate_finite(integrand, 0.0, 1.0, options).value;
}

double phi_z_thin(double delta_phi) { return numerics::sinc(delta_phi); }

double phi_z_thick(double xi) {
  if (!(xi >= 0.0)) {
    throw Error(ErrorCode::ValidationError, "phi_z_thick requires Xi >= 0");
  }
  if (xi < 1e-6) return 1.0 - xi * xi / 3.0;
  return std::sqrt(std::numbers::pi) / (2.0 * xi) * numerics::erf(xi);
}

double overlap_phi(const OverlapGeometry& geometry, double delta_k_y,
                   double delta_k_z, double crystal_length) {
  require_positive(crystal_length, "crystal length");
  const OverlapGeometry g =
      with_mismatch(geometry, delta_k_y, delta_k_z, crystal_length);
  const double transverse = std::numbers::pi / std::sqrt(g.A * g.C) *
                            std::exp(-delta_k_y * delta_k_y / (4.0 * g.C));
  return transverse * crystal_length * phi_z(g.Xi, g.delta_phi);
}

numerics::QuadratureResult spectral_integral(double xi, double rel_tol) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) {
    throw Error(ErrorCode::ValidationError, "spectral integral needs Xi >= 0");
  }
  numerics::InfiniteOptions options;
  options.even = true;
  options.max_evaluations = 5'000'000;
  // Integrating by parts, phi_z = E (sin x/x - 2 Xi^2 cos x/x^2
  // - (4 Xi^4 - 2 Xi^2) sin x/x^3) + O(x^-4) with E = exp(-Xi^2); the u = 0
  // end contributes nothing real because the Gaussian is even. Over
  // |x| > T, T a multiple of pi, that leaves
  // E^2 (1/T - (1/2 + 2 Xi^2/3 + 4 Xi^4/3)/T^3) + O(T^-5).
  const double xi2 = xi * xi;
  const double e2 = std::exp(-2.0 * xi2);
  const double c3 = 0.5 + 2.0 * xi2 / 3.0 + 4.0 * xi2 * xi2 / 3.0;
  options.tail = [e2, c3](double t) { return e2 * (1.0 / t - c3 / (t * t * t)); };
  const auto integrand = [xi](double x) {
    const double p = phi_z(xi, x);
    return p * p;
  };
  // A multiple of pi keeps each doubling window on whole periods of the
  // sin^2 tail.
  return numerics::integrate_symmetric_infinite(integrand, rel_tol,
                                                16.0 * std::numbers::pi, options);
}

double spectral_integral_S(double xi) { return spectral_integral(xi).value; }

}  // namespace spdc::modes
