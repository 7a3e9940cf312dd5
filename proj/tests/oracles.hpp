#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace spdc::test {

// Midpoint-rule evaluation of the overlap of the three tilted Gaussian modes
// with the plane-wave mismatch factor, over |x|, |y| <= 6 W_max and the
// crystal. Works directly from the mode functions: no A..K coefficients.
inline double brute_force_overlap(double wp, double ws, double wi, double th_s,
                                  double th_i, double dky, double dkz, double l) {
  const double wmax = std::max({wp, ws, wi});
  const double half = 6.0 * wmax;
  const int nx = 120;
  const int ny = 160;
  const int nz = 400;
  const double hx = 2.0 * half / nx;
  const double hy = 2.0 * half / ny;
  const double hz = l / nz;
  std::complex<double> sum = 0.0;
  for (int iz = 0; iz < nz; ++iz) {
    const double z = -l / 2 + (iz + 0.5) * hz;
    for (int iy = 0; iy < ny; ++iy) {
      const double y = -half + (iy + 0.5) * hy;
      const double ys = y * std::cos(th_s) + z * std::sin(th_s);
      const double yi = y * std::cos(th_i) - z * std::sin(th_i);
      std::complex<double> row = 0.0;
      for (int ix = 0; ix < nx; ++ix) {
        const double x = -half + (ix + 0.5) * hx;
        const double up = std::exp(-(x * x + y * y) / (wp * wp));
        const double us = std::exp(-(x * x + ys * ys) / (ws * ws));
        const double ui = std::exp(-(x * x + yi * yi) / (wi * wi));
        row += up * us * ui;
      }
      sum += row * std::polar(1.0, dky * y + dkz * z);
    }
  }
  // The imaginary part vanishes by the inversion symmetry r -> -r.
  return sum.real() * hx * hy * hz;
}

}  // namespace spdc::test
