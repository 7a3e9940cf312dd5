#pragma once

#include <string_view>

#include "spdc/numerics.hpp"

namespace spdc::modes {

enum class Role { Pump, Signal, Idler };

std::string_view to_string(Role role) noexcept;

/// A paraxial Gaussian beam inside the crystal.
///
/// `theta` is the internal tilt magnitude relative to the pump axis. Signal
/// and idler tilt to opposite sides of the pump in the common y-z plane, so
/// both are given as non-negative magnitudes.
struct GaussianMode {
  double waist = 0.0;       // m, 1/e field radius
  double lambda_vac = 0.0;  // m
  double theta = 0.0;       // rad
  double n = 1.0;
  Role role = Role::Pump;

  void validate() const;
};

/// Coefficients of the three-mode overlap after the transverse integration.
struct OverlapGeometry {
  double A = 0.0;          // 1/m^2
  double C = 0.0;          // 1/m^2
  double D = 0.0;          // 1/m^2
  double F = 0.0;          // 1/m^2
  double H = 0.0;          // 1/m^2, F - D^2/(4C)
  double K = 0.0;          // 1/m, total longitudinal mismatch
  double Xi = 0.0;         // sqrt(H) l / 2
  double delta_phi = 0.0;  // K l / 2
};

/// alpha = sqrt(2/(pi W^2)); makes alpha^2 * integral |U|^2 dx dy = 1.
double normalization_alpha(double waist);

/// Relative frequency shift sqrt(1 + 2/(k W)^2) - 1 from transverse
/// confinement, k = 2 pi n / lambda. Reported only; rates ignore it.
double confinement_correction(double waist, double lambda_vac, double n);

/// A, C, D, F, H and Xi for the given beams; K and delta_phi are left zero
/// (see with_mismatch). H slightly below zero from cancellation is clamped;
/// anything below -1e-18 1/m^2 raises NegativeH.
OverlapGeometry geometry_coefficients(const GaussianMode& pump,
                                      const GaussianMode& signal,
                                      const GaussianMode& idler,
                                      double crystal_length);

/// Fills K = delta_k_z - delta_k_y D/(2C) and delta_phi = K l/2.
///
/// The minus sign follows from the mode-coordinate rotation in which the
/// signal frame is y_s = y cos(th_s) + z sin(th_s), matching the sign of D.
OverlapGeometry with_mismatch(OverlapGeometry geometry, double delta_k_y,
                              double delta_k_z, double crystal_length);

/// Phi_z / l = integral_0^1 exp(-Xi^2 u^2) cos(delta_phi u) du.
double phi_z(double xi, double delta_phi);

/// Collinear (Xi = 0) closed form, sinc(delta_phi).
double phi_z_thin(double delta_phi);

/// sqrt(pi)/(2 Xi) erf(Xi): the delta_phi = 0 value, which is also the
/// large-Xi envelope. Xi = 0 returns the limit 1.
double phi_z_thick(double xi);

/// Full overlap integral of the three modes over the crystal, m^3:
/// pi/sqrt(A C) exp(-dky^2/(4C)) l Phi_z/l.
double overlap_phi(const OverlapGeometry& geometry, double delta_k_y,
                   double delta_k_z, double crystal_length);

/// S(Xi) = integral over the real line of (Phi_z/l)^2 d(delta_phi).
numerics::QuadratureResult spectral_integral(double xi,
                                             double rel_tol = 1e-9);

double spectral_integral_S(double xi);

}  // namespace spdc::modes
