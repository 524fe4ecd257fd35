// Scalar reference kernels. These define the numerics the vector variants
// are tested against; keep them simple.

#include <cmath>
#include <numbers>

#include "apvar/simd/kernels.hpp"

namespace apvar::simd {

double phase_fraction(double n, double alpha) {
  const double prod = n * alpha;
  const double err = std::fma(n, alpha, -prod);
  double frac = (prod - std::floor(prod)) + err;
  frac -= std::floor(frac);
  return frac;
}

namespace scalar {

namespace {

// Neumaier compensated accumulator.
struct Compensated {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace

double sum(std::span<const double> x) {
  Compensated acc;
  for (double v : x) acc.add(v);
  return acc.value();
}

double dot(std::span<const double> x, std::span<const double> y) {
  Compensated acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i] * y[i]);
  return acc.value();
}

void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
}

void power_spectrum(std::span<const std::complex<double>> z, std::span<double> out) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
}

void cross_spectrum(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                    std::span<double> re, std::span<double> im, std::span<double> mag) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re[i] = ar * br + ai * bi;
    im[i] = ai * br - ar * bi;
    mag[i] = std::sqrt((ar * ar + ai * ai) * (br * br + bi * bi));
  }
}

std::complex<double> exp_sum(std::span<const double> coeffs, double alpha) {
  Compensated re, im;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double a = coeffs[i];
    if (a == 0.0) continue;
    const double theta = 2.0 * std::numbers::pi * phase_fraction(static_cast<double>(i + 1), alpha);
    re.add(a * std::cos(theta));
    im.add(a * std::sin(theta));
  }
  return {re.value(), im.value()};
}

}  // namespace scalar
}  // namespace apvar::simd
