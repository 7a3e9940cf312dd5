#pragma once

#include <cstddef>
#include <functional>

namespace spdc::numerics {

using Integrand = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

inline constexpr double kDefaultRelTol = 1e-9;
inline constexpr double kDefaultAbsTol = 1e-12;

struct FiniteOptions {
  double rel_tol = kDefaultRelTol;
  double abs_tol = kDefaultAbsTol;
  std::size_t max_evaluations = 1'000'000;
  // Number of equal pieces [a,b] is split into before adaptive refinement
  // starts. Oscillatory integrands converge much faster when each starting
  // piece spans at most about half a period.
  std::size_t initial_subdivisions = 1;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
///
/// Intervals are refined in order of largest error estimate until the summed
/// estimate meets max(abs_tol, rel_tol * |value|).
/// Throws Error(NonConvergence) when the evaluation budget is exhausted and
/// Error(ValidationError) for a > b or non-positive tolerances.
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const FiniteOptions& options = {});

QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  double rel_tol, double abs_tol);

struct InfiniteOptions {
  double rel_tol = kDefaultRelTol;
  double abs_tol = kDefaultAbsTol;
  // Truncation stops growing here; unresolved tails raise TailBoundFailure.
  double max_half_width = 1e6;
  std::size_t max_evaluations = 1'000'000;
  // f(-x) == f(x): only the positive half-line is evaluated.
  bool even = false;
  // Optional model of the integral over |x| > T (both sides). When set it
  // replaces the inverse-square tail model below.
  Integrand tail;
};

/// Integral of f over the whole real line.
///
/// The window [-T, T] is doubled starting from T = half_width_hint. The mass
/// beyond T is modelled as an inverse-square tail, which makes it equal to the
/// integral over the last window T/2 < |x| < T. Iteration stops once two
/// consecutive tail-corrected totals agree to tolerance; their difference is
/// folded into abs_error_estimate. A caller-supplied `tail` model is used
/// instead when the integrand's asymptotics are known. For sinc-like
/// integrands a hint that is a multiple of pi keeps every window aligned with
/// whole periods.
QuadratureResult integrate_symmetric_infinite(const Integrand& f,
                                              double rel_tol,
                                              double half_width_hint,
                                              const InfiniteOptions& options);

QuadratureResult integrate_symmetric_infinite(const Integrand& f,
                                              double rel_tol = kDefaultRelTol,
                                              double half_width_hint = 32.0);

/// Error function, absolute accuracy 1e-15 or better; exactly odd.
double erf(double x) noexcept;

/// sin(x)/x with sinc(0) = 1.
double sinc(double x) noexcept;

}  // namespace spdc::numerics
