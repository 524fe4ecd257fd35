#include <atomic>
#include <cstdlib>
#include <string_view>

#include "apvar/simd/kernels.hpp"

namespace apvar::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  const bool avx2_ok = backend_available(Backend::kAvx2);
  if (const char* env = std::getenv("APVAR_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") return Backend::kScalar;
    if (v == "avx2" && avx2_ok) return Backend::kAvx2;
  }
  return avx2_ok ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<int> g_backend{-1};

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  if (b == Backend::kScalar) return true;
  return avx2::compiled() && cpu_has_avx2();
}

Backend active_backend() {
  int v = g_backend.load(std::memory_order_relaxed);
  if (v < 0) {
    v = static_cast<int>(detect());
    g_backend.store(v, std::memory_order_relaxed);
  }
  return static_cast<Backend>(v);
}

void force_backend(Backend b) {
  if (!backend_available(b)) b = Backend::kScalar;
  g_backend.store(static_cast<int>(b), std::memory_order_relaxed);
}

#define APVAR_DISPATCH(fn, ...)                                               \
  return active_backend() == Backend::kAvx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)

double sum(std::span<const double> x) { APVAR_DISPATCH(sum, x); }

double dot(std::span<const double> x, std::span<const double> y) { APVAR_DISPATCH(dot, x, y); }

void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  APVAR_DISPATCH(multiply, x, y, out);
}

void power_spectrum(std::span<const std::complex<double>> z, std::span<double> out) {
  APVAR_DISPATCH(power_spectrum, z, out);
}

void cross_spectrum(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                    std::span<double> re, std::span<double> im, std::span<double> mag) {
  APVAR_DISPATCH(cross_spectrum, a, b, re, im, mag);
}

std::complex<double> exp_sum(std::span<const double> coeffs, double alpha) {
  APVAR_DISPATCH(exp_sum, coeffs, alpha);
}

#undef APVAR_DISPATCH

}  // namespace apvar::simd
