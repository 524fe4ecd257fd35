#pragma once

#include <complex>
#include <span>

namespace apvar::simd {

enum class Backend { kScalar, kAvx2 };

const char* backend_name(Backend b);
bool backend_available(Backend b);
/// Backend chosen at first use: AVX2+FMA when the CPU reports both, else
/// scalar. The APVAR_SIMD environment variable ("scalar"/"avx2") overrides.
Backend active_backend();
/// Pins the backend for the rest of the process (tests, benchmarks).
void force_backend(Backend b);

// Dispatching entry points. All reductions use a fixed association order
// for a given backend, so repeated runs are bit-identical.

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
/// out[i] = x[i] * y[i]
void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out);
/// out[i] = |z[i]|^2
void power_spectrum(std::span<const std::complex<double>> z, std::span<double> out);
/// re + i im = a[i] * conj(b[i]);  mag = |a[i]| |b[i]|
void cross_spectrum(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                    std::span<double> re, std::span<double> im, std::span<double> mag);
/// Sum_{n=1}^{N} a_n e(n alpha) where coeffs[i] = a_{i+1}.
std::complex<double> exp_sum(std::span<const double> coeffs, double alpha);

/// Fractional part of n * alpha in [0, 1), with the product's rounding error
/// folded back in via fma.
double phase_fraction(double n, double alpha);

namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out);
void power_spectrum(std::span<const std::complex<double>> z, std::span<double> out);
void cross_spectrum(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                    std::span<double> re, std::span<double> im, std::span<double> mag);
std::complex<double> exp_sum(std::span<const double> coeffs, double alpha);
}  // namespace scalar

namespace avx2 {
bool compiled();
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out);
void power_spectrum(std::span<const std::complex<double>> z, std::span<double> out);
void cross_spectrum(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                    std::span<double> re, std::span<double> im, std::span<double> mag);
std::complex<double> exp_sum(std::span<const double> coeffs, double alpha);
}  // namespace avx2

}  // namespace apvar::simd
