#include <fftw3.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>

#include "apvar/circle.hpp"
#include "apvar/simd/kernels.hpp"

namespace apvar {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
std::unique_ptr<T[], FftwFree> fftw_array(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw CapacityError("fftw_malloc failed for " + std::to_string(n) + " elements");
  return std::unique_ptr<T[], FftwFree>(p);
}

class RealFft {
 public:
  explicit RealFft(std::int64_t T)
      : T_(T),
        in_(fftw_array<double>(static_cast<std::size_t>(T))),
        out_(fftw_array<fftw_complex>(static_cast<std::size_t>(T / 2 + 1))) {
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(T), in_.get(), out_.get(), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw CapacityError("fftw plan creation failed");
  }
  ~RealFft() { fftw_destroy_plan(plan_); }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_.get(); }
  /// Conjugate of the forward transform, i.e. Sum_n x_n e(n t / T), for t <= T/2.
  std::complex<double> at(std::int64_t t) const {
    const auto& c = out_[static_cast<std::size_t>(t)];
    return {c[0], -c[1]};
  }
  void run() { fftw_execute(plan_); }

 private:
  std::int64_t T_;
  std::unique_ptr<double[], FftwFree> in_;
  std::unique_ptr<fftw_complex[], FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

constexpr int kMaxOrder = 4;  // A, A', ..., A''''

}  // namespace

Spectrum build_spectrum(const Sequence& seq, std::int64_t T) {
  const std::int64_t n = seq.size();
  require(n >= 1, "build_spectrum: empty sequence");
  if (T == 0) T = default_grid_size(n);
  require(std::has_single_bit(static_cast<std::uint64_t>(T)), "build_spectrum: T must be a power of two");
  require(T >= 2 * n, "build_spectrum: T must be at least 2N");
  if (T > limits().max_fft_size) {
    throw CapacityError("build_spectrum: T=" + std::to_string(T) + " exceeds the FFT budget " +
                        std::to_string(limits().max_fft_size));
  }

  Spectrum s;
  s.T = T;
  s.N = n;
  s.sum_squares = seq.sum_squares();
  s.sum_abs = seq.sum_abs();
  const double two_pi_n = 2.0 * std::numbers::pi * static_cast<double>(n);
  s.derivative_bound = two_pi_n * s.sum_abs;

  const auto size = static_cast<std::size_t>(T);
  s.values.resize(size);
  s.power.resize(size);
  s.deriv_abs.resize(size);
  s.sup0.assign(size, 0.0);
  s.sup1.assign(size, 0.0);
  s.sup2.assign(size, 0.0);

  const double half_h = 0.5 / static_cast<double>(T);
  // Taylor weights (h/2)^l / l! for l = 0, 1, 2 and the order-3 remainder factor.
  const double taylor[3] = {1.0, half_h, half_h * half_h / 2.0};
  const double rem3 = half_h * half_h * half_h / 6.0;

  RealFft fft(T);
  for (int d = 0; d <= kMaxOrder; ++d) {
    double* in = fft.input();
    in[0] = 0.0;
    for (std::int64_t m = 1; m <= n; ++m) {
      const double scale = std::pow(2.0 * std::numbers::pi * static_cast<double>(m), d);
      in[m] = scale * seq[m];
    }
    for (std::int64_t m = n + 1; m < T; ++m) in[m] = 0.0;
    fft.run();
    for (std::int64_t t = 0; t < T; ++t) {
      const std::int64_t u = t <= T / 2 ? t : T - t;
      std::complex<double> z = fft.at(u);
      if (t > T / 2) z = std::conj(z);
      const double mag = std::abs(z);
      const auto i = static_cast<std::size_t>(t);
      if (d == 0) s.values[i] = z;
      if (d == 1) s.deriv_abs[i] = mag;
      // sup_j accumulates (h/2)^l / l! |A^(j+l)| for l = d - j in {0, 1, 2}.
      for (int j = 0; j <= 2; ++j) {
        const int l = d - j;
        if (l < 0 || l > 2) continue;
        double& target = j == 0 ? s.sup0[i] : (j == 1 ? s.sup1[i] : s.sup2[i]);
        target += taylor[l] * mag;
      }
    }
  }
  for (int j = 0; j <= 2; ++j) {
    const double global = rem3 * std::pow(two_pi_n, j + 3) * s.sum_abs;
    auto& arr = j == 0 ? s.sup0 : (j == 1 ? s.sup1 : s.sup2);
    for (double& v : arr) v += global;
  }
  simd::power_spectrum(s.values, s.power);
  s.total_mass = simd::sum(s.power) / static_cast<double>(T);
  return s;
}

void Spectrum::export_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  auto put_le = [&out](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put_le(static_cast<std::uint64_t>(T));
  for (double p : power) put_le(std::bit_cast<std::uint64_t>(p));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace apvar
