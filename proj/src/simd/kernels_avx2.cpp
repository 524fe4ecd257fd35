// AVX2/FMA variants of the reference kernels. Compiled with -mavx2 -mfma;
// only reached through dispatch after a CPUID check.

#include <cmath>
#include <numbers>

#include "apvar/simd/kernels.hpp"

#if defined(APVAR_HAVE_AVX2_TU)
#include <immintrin.h>
#endif

namespace apvar::simd::avx2 {

#if defined(APVAR_HAVE_AVX2_TU)

namespace {

// Per-lane Neumaier compensated accumulator.
struct Acc4 {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d abs_s = _mm256_andnot_pd(sign, s);
    const __m256d abs_x = _mm256_andnot_pd(sign, x);
    const __m256d s_ge = _mm256_cmp_pd(abs_s, abs_x, _CMP_GE_OQ);
    const __m256d big = _mm256_blendv_pd(x, s, s_ge);
    const __m256d small = _mm256_blendv_pd(s, x, s_ge);
    c = _mm256_add_pd(c, _mm256_add_pd(_mm256_sub_pd(big, t), small));
    s = t;
  }
};

// Lane-order Neumaier fold of an accumulator plus a scalar tail.
double fold(const Acc4& acc, double tail_s, double tail_c) {
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, acc.s);
  _mm256_store_pd(c, acc.c);
  double total = 0.0, comp = tail_c;
  auto add = [&](double x) {
    const double t = total + x;
    comp += (std::abs(total) >= std::abs(x)) ? (total - t) + x : (x - t) + total;
    total = t;
  };
  for (int i = 0; i < 4; ++i) add(s[i]);
  add(tail_s);
  for (int i = 0; i < 4; ++i) comp += c[i];
  return total + comp;
}

void scalar_add(double& s, double& c, double x) {
  const double t = s + x;
  c += (std::abs(s) >= std::abs(x)) ? (s - t) + x : (x - t) + s;
  s = t;
}

}  // namespace

bool compiled() { return true; }

double sum(std::span<const double> x) {
  Acc4 acc;
  std::size_t i = 0;
  const std::size_t n = x.size();
  for (; i + 4 <= n; i += 4) acc.add(_mm256_loadu_pd(x.data() + i));
  double ts = 0.0, tc = 0.0;
  for (; i < n; ++i) scalar_add(ts, tc, x[i]);
  return fold(acc, ts, tc);
}

double dot(std::span<const double> x, std::span<const double> y) {
  Acc4 acc;
  std::size_t i = 0;
  const std::size_t n = x.size();
  for (; i + 4 <= n; i += 4) {
    acc.add(_mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i)));
  }
  double ts = 0.0, tc = 0.0;
  for (; i < n; ++i) scalar_add(ts, tc, x[i] * y[i]);
  return fold(acc, ts, tc);
}

void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  std::size_t i = 0;
  const std::size_t n = x.size();
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void power_spectrum(std::span<const std::complex<double>> z, std::span<double> out) {
  const auto* p = reinterpret_cast<const double*>(z.data());
  std::size_t i = 0;
  const std::size_t n = z.size();
  for (; i + 4 <= n; i += 4) {
    // [r0 i0 r1 i1], [r2 i2 r3 i3]
    const __m256d v0 = _mm256_loadu_pd(p + 2 * i);
    const __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);
    const __m256d sq0 = _mm256_mul_pd(v0, v0);
    const __m256d sq1 = _mm256_mul_pd(v1, v1);
    // hadd gives [s0 s2 s1 s3]; restore order.
    const __m256d h = _mm256_hadd_pd(sq0, sq1);
    _mm256_storeu_pd(out.data() + i, _mm256_permute4x64_pd(h, 0b11011000));
  }
  for (; i < n; ++i) out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
}

void cross_spectrum(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                    std::span<double> re, std::span<double> im, std::span<double> mag) {
  const auto* pa = reinterpret_cast<const double*>(a.data());
  const auto* pb = reinterpret_cast<const double*>(b.data());
  std::size_t i = 0;
  const std::size_t n = a.size();
  for (; i + 4 <= n; i += 4) {
    const __m256d a0 = _mm256_loadu_pd(pa + 2 * i), a1 = _mm256_loadu_pd(pa + 2 * i + 4);
    const __m256d b0 = _mm256_loadu_pd(pb + 2 * i), b1 = _mm256_loadu_pd(pb + 2 * i + 4);
    // De-interleave into [re0 re2 re1 re3] style then fix order.
    const __m256d ar = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a0, a1), 0b11011000);
    const __m256d ai = _mm256_permute4x64_pd(_mm256_unpackhi_pd(a0, a1), 0b11011000);
    const __m256d br = _mm256_permute4x64_pd(_mm256_unpacklo_pd(b0, b1), 0b11011000);
    const __m256d bi = _mm256_permute4x64_pd(_mm256_unpackhi_pd(b0, b1), 0b11011000);
    const __m256d r = _mm256_fmadd_pd(ar, br, _mm256_mul_pd(ai, bi));
    const __m256d m = _mm256_fmsub_pd(ai, br, _mm256_mul_pd(ar, bi));
    const __m256d na = _mm256_fmadd_pd(ar, ar, _mm256_mul_pd(ai, ai));
    const __m256d nb = _mm256_fmadd_pd(br, br, _mm256_mul_pd(bi, bi));
    _mm256_storeu_pd(re.data() + i, r);
    _mm256_storeu_pd(im.data() + i, m);
    _mm256_storeu_pd(mag.data() + i, _mm256_sqrt_pd(_mm256_mul_pd(na, nb)));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re[i] = ar * br + ai * bi;
    im[i] = ai * br - ar * bi;
    mag[i] = std::sqrt((ar * ar + ai * ai) * (br * br + bi * bi));
  }
}

std::complex<double> exp_sum(std::span<const double> coeffs, double alpha) {
  // Four lanes carry phasors for n, n+1, n+2, n+3 and rotate by e(4 alpha).
  // Phases are re-seeded exactly every kBlock terms to bound drift.
  constexpr std::size_t kBlock = 64;
  const double two_pi = 2.0 * std::numbers::pi;
  const std::size_t n = coeffs.size();
  const double step = two_pi * phase_fraction(4.0, alpha);
  const __m256d wr = _mm256_set1_pd(std::cos(step));
  const __m256d wi = _mm256_set1_pd(std::sin(step));

  Acc4 acc_re, acc_im;
  double tr = 0.0, trc = 0.0, ti = 0.0, tic = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += kBlock) {
    const std::size_t block_end = std::min(n, i + kBlock);
    alignas(32) double zr0[4], zi0[4];
    for (int l = 0; l < 4; ++l) {
      const double th = two_pi * phase_fraction(static_cast<double>(i + 1 + l), alpha);
      zr0[l] = std::cos(th);
      zi0[l] = std::sin(th);
    }
    __m256d zr = _mm256_load_pd(zr0);
    __m256d zi = _mm256_load_pd(zi0);
    std::size_t j = i;
    for (; j + 4 <= block_end; j += 4) {
      const __m256d a = _mm256_loadu_pd(coeffs.data() + j);
      acc_re.add(_mm256_mul_pd(a, zr));
      acc_im.add(_mm256_mul_pd(a, zi));
      const __m256d nr = _mm256_fmsub_pd(zr, wr, _mm256_mul_pd(zi, wi));
      const __m256d ni = _mm256_fmadd_pd(zr, wi, _mm256_mul_pd(zi, wr));
      zr = nr;
      zi = ni;
    }
    if (j < block_end) {
      i = j;
      break;
    }
    if (block_end == n) {
      i = n;
      break;
    }
  }
  for (; i < n; ++i) {
    const double a = coeffs[i];
    if (a == 0.0) continue;
    const double th = two_pi * phase_fraction(static_cast<double>(i + 1), alpha);
    scalar_add(tr, trc, a * std::cos(th));
    scalar_add(ti, tic, a * std::sin(th));
  }
  return {fold(acc_re, tr, trc), fold(acc_im, ti, tic)};
}

#else  // !APVAR_HAVE_AVX2_TU

bool compiled() { return false; }
double sum(std::span<const double> x) { return scalar::sum(x); }
double dot(std::span<const double> x, std::span<const double> y) { return scalar::dot(x, y); }
void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  scalar::multiply(x, y, out);
}
void power_spectrum(std::span<const std::complex<double>> z, std::span<double> out) {
  scalar::power_spectrum(z, out);
}
void cross_spectrum(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                    std::span<double> re, std::span<double> im, std::span<double> mag) {
  scalar::cross_spectrum(a, b, re, im, mag);
}
std::complex<double> exp_sum(std::span<const double> coeffs, double alpha) {
  return scalar::exp_sum(coeffs, alpha);
}

#endif

}  // namespace apvar::simd::avx2
