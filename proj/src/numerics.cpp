#include "spdc/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc::numerics {
namespace {

// Kronrod 15-point abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed abscissae. Values from QUADPACK.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const {
    return l.error < r.error;
  }
};

Segment kronrod15(const Integrand& f, double a, double b) {
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();

  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double fc = f(centr);

  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};

  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = hlgth * kXgk[j];
    const double f1 = f(centr - dx);
    const double f2 = f(centr + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  const double result = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0) {
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  }
  if (resabs > uflow / (50.0 * epmach)) {
    abserr = std::max(epmach * 50.0 * resabs, abserr);
  }
  return {a, b, result, abserr};
}

constexpr std::size_t kRuleEvaluations = 15;

void check_tolerances(double rel_tol, double abs_tol) {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::ValidationError,
                "quadrature tolerances must be positive");
  }
}

}  // namespace

QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const FiniteOptions& options) {
  check_tolerances(options.rel_tol, options.abs_tol);
  if (!(a <= b)) {
    throw Error(ErrorCode::ValidationError,
                "integrate_finite requires a <= b");
  }
  if (a == b) return {0.0, 0.0, 1};

  const std::size_t pieces = std::max<std::size_t>(1, options.initial_subdivisions);
  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  std::size_t evaluations = 0;
  double total = 0.0;
  double total_error = 0.0;
  const double step = (b - a) / static_cast<double>(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    const double lo = a + step * static_cast<double>(k);
    const double hi = (k + 1 == pieces) ? b : a + step * static_cast<double>(k + 1);
    Segment s = kronrod15(f, lo, hi);
    evaluations += kRuleEvaluations;
    total += s.value;
    total_error += s.error;
    heap.push(s);
  }

  auto tolerance = [&] {
    return std::max(options.abs_tol, options.rel_tol * std::abs(total));
  };

  while (total_error > tolerance()) {
    if (evaluations + 2 * kRuleEvaluations > options.max_evaluations) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b
          << "] did not converge within " << options.max_evaluations
          << " evaluations (error estimate " << total_error << ")";
      throw Error(ErrorCode::NonConvergence, msg.str());
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw Error(ErrorCode::NonConvergence,
                  "adaptive quadrature exhausted floating-point resolution");
    }
    heap.pop();
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    evaluations += 2 * kRuleEvaluations;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from scratch so the running-update drift does not leak into the
  // reported value; order is fixed by the heap contents, hence deterministic.
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  double value = 0.0;
  double error = 0.0;
  for (const Segment& s : segments) {
    value += s.value;
    error += s.error;
  }
  return {value, error, evaluations};
}

QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  double rel_tol, double abs_tol) {
  FiniteOptions options;
  options.rel_tol = rel_tol;
  options.abs_tol = abs_tol;
  return integrate_finite(f, a, b, options);
}

QuadratureResult integrate_symmetric_infinite(const Integrand& f,
                                              double rel_tol,
                                              double half_width_hint,
                                              const InfiniteOptions& options) {
  check_tolerances(rel_tol, options.abs_tol);
  if (!(half_width_hint > 0.0) || !std::isfinite(half_width_hint)) {
    throw Error(ErrorCode::ValidationError,
                "half_width_hint must be positive and finite");
  }

  std::size_t evaluations = 0;
  double quad_error = 0.0;

  auto budget_left = [&] {
    return options.max_evaluations > evaluations
               ? options.max_evaluations - evaluations
               : std::size_t{0};
  };

  // Integral over [lo, hi] plus its mirror image.
  auto both_sides = [&](double lo, double hi, std::size_t pieces,
                        double abs_target) {
    FiniteOptions fo;
    fo.rel_tol = rel_tol;
    fo.abs_tol = std::max(options.abs_tol, abs_target);
    fo.initial_subdivisions = pieces;
    fo.max_evaluations = budget_left();
    const QuadratureResult right = integrate_finite(f, lo, hi, fo);
    evaluations += right.evaluations;
    if (options.even) {
      quad_error += 2.0 * right.abs_error_estimate;
      return 2.0 * right.value;
    }
    fo.max_evaluations = budget_left();
    const QuadratureResult left =
        integrate_finite([&f](double x) { return f(-x); }, lo, hi, fo);
    evaluations += left.evaluations;
    quad_error += right.abs_error_estimate + left.abs_error_estimate;
    return right.value + left.value;
  };

  double half_width = half_width_hint;
  double core = both_sides(0.0, half_width, 1, 0.0);
  double previous = std::numeric_limits<double>::quiet_NaN();
  std::size_t pieces = 1;

  for (;;) {
    const double next = 2.0 * half_width;
    if (next > options.max_half_width) {
      std::ostringstream msg;
      msg << "tail of the infinite-range integral not resolved at half-width "
          << half_width << " (maximum " << options.max_half_width << ")";
      throw Error(ErrorCode::TailBoundFailure, msg.str());
    }
    const double window = both_sides(half_width, next, pieces,
                                     0.25 * rel_tol * std::abs(core));
    core += window;
    const double estimate = core + (options.tail ? options.tail(next) : window);
    const double change = std::abs(estimate - previous);
    const double tol = std::max(options.abs_tol, rel_tol * std::abs(estimate));
    if (change <= tol) {
      return {estimate, change + quad_error, std::max<std::size_t>(evaluations, 1)};
    }
    previous = estimate;
    half_width = next;
    pieces *= 2;
  }
}

QuadratureResult integrate_symmetric_infinite(const Integrand& f,
                                              double rel_tol,
                                              double half_width_hint) {
  return integrate_symmetric_infinite(f, rel_tol, half_width_hint,
                                      InfiniteOptions{});
}

double erf(double x) noexcept {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  double result;
  if (ax < 3.0) {
    // erf(x) = 2/sqrt(pi) exp(-x^2) sum_n (2x^2)^n x / (2n+1)!!
    // All terms are positive, so there is no cancellation.
    const double x2 = ax * ax;
    double term = ax;
    double sum = ax;
    for (int n = 1; n < 200; ++n) {
      term *= 2.0 * x2 / (2.0 * n + 1.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    result = 2.0 * std::numbers::inv_sqrtpi * std::exp(-x2) * sum;
  } else if (ax < 27.0) {
    // erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // evaluated with the modified Lentz algorithm.
    constexpr double tiny = 1e-300;
    double f = ax;
    double c = ax;
    double d = 0.0;
    for (int n = 1; n < 500; ++n) {
      const double an = 0.5 * n;
      d = ax + an * d;
      if (d == 0.0) d = tiny;
      d = 1.0 / d;
      c = ax + an / c;
      if (c == 0.0) c = tiny;
      const double delta = c * d;
      f *= delta;
      if (std::abs(delta - 1.0) < 1e-16) break;
    }
    const double erfc = std::exp(-ax * ax) * std::numbers::inv_sqrtpi / f;
    result = 1.0 - erfc;
  } else {
    result = 1.0;
  }
  return x < 0.0 ? -result : result;
}

double sinc(double x) noexcept {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace spdc::numerics
