#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apvar/windows.hpp"

namespace apvar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double window_value(double eps, double t) {
  const double w = eps / 4.0;
  if (t <= w || t >= 1.0 - w) return 0.0;
  return smooth_step((t - w) / w) * smooth_step((1.0 - w - t) / w);
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = psi(x), b = psi(1.0 - x);
  return a / (a + b);
}

SmoothWindow SmoothWindow::build(double eps) { return build(eps, Options{}); }

SmoothWindow SmoothWindow::build(double eps, const Options& opt) {
  if (!(eps > 0.0 && eps < 0.25)) throw PreconditionError("build_window: eps must lie in (0, 1/4)");
  require(opt.log2_samples >= 8 && opt.log2_samples <= 20, "build_window: log2_samples out of range");
  require(opt.log2_padding >= 2 && opt.log2_padding <= 10, "build_window: log2_padding out of range");

  SmoothWindow w;
  w.eps_ = eps;
  const std::int64_t m = std::int64_t{1} << opt.log2_samples;
  const std::int64_t pad = std::int64_t{1} << opt.log2_padding;
  const std::int64_t len = m * pad;
  w.xi_step_ = 1.0 / static_cast<double>(pad);

  w.samples_.resize(static_cast<std::size_t>(m));
  double s1 = 0.0, s2 = 0.0;
  for (std::int64_t j = 0; j < m; ++j) {
    const double v = window_value(eps, static_cast<double>(j) / static_cast<double>(m));
    w.samples_[static_cast<std::size_t>(j)] = v;
    s1 += v;
    s2 += v * v;
  }
  w.integral_ = s1 / static_cast<double>(m);
  w.integral_sq_ = s2 / static_cast<double>(m);

  // (1/M) Sum_j Phi(j/M) e(-j k / (M P)) approximates Phi^(k/P).
  auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(len)));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(len / 2 + 1)));
  if (in == nullptr || out == nullptr) {
    fftw_free(in);
    fftw_free(out);
    throw CapacityError("build_window: FFT buffer allocation failed");
  }
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, out, FFTW_ESTIMATE);
  std::fill(in, in + len, 0.0);
  std::copy(w.samples_.begin(), w.samples_.end(), in);
  fftw_execute(plan);

  // Keep |xi| <= M/4, well inside the alias-free band.
  const std::int64_t kmax = m / 4 * pad;
  w.xi_max_ = static_cast<double>(kmax - 2) * w.xi_step_;
  w.table_.resize(static_cast<std::size_t>(kmax + 1));
  for (std::int64_t k = 0; k <= kmax; ++k) {
    const double xi = static_cast<double>(k) * w.xi_step_;
    const std::complex<double> z(out[k][0], out[k][1]);
    const std::complex<double> shift = std::polar(1.0, kTwoPi * xi / 2.0);
    w.table_[static_cast<std::size_t>(k)] = (z * shift).real() / static_cast<double>(m);
  }
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);

  for (std::size_t k = 0; k < w.table_.size(); ++k) {
    const double xi = static_cast<double>(k) * w.xi_step_;
    const double g = std::abs(w.table_[k]);
    w.c1_ = std::max(w.c1_, g * (1.0 + xi));
    w.c2_ = std::max(w.c2_, g * std::pow(1.0 + xi, 2));
    w.c4_ = std::max(w.c4_, g * std::pow(1.0 + xi, 4));
  }
  return w;
}

double SmoothWindow::operator()(double t) const { return window_value(eps_, t); }

double SmoothWindow::transform_real(double xi) const {
  const double x = std::abs(xi);
  if (x > xi_max_) {
    const auto z = transform_direct(x);
    return (z * std::polar(1.0, kTwoPi * x / 2.0)).real();
  }
  const double u = x / xi_step_;
  auto k = static_cast<std::int64_t>(std::floor(u));
  const double f = u - static_cast<double>(k);
  auto g = [&](std::int64_t i) { return table_[static_cast<std::size_t>(i < 0 ? -i : i)]; };
  // Four-point Lagrange through k-1, k, k+1, k+2 (g is even, so k-1 = -1 reflects).
  const double gm = g(k - 1), g0 = g(k), g1 = g(k + 1), g2 = g(k + 2);
  return -f * (f - 1) * (f - 2) / 6.0 * gm + (f + 1) * (f - 1) * (f - 2) / 2.0 * g0 -
         (f + 1) * f * (f - 2) / 2.0 * g1 + (f + 1) * f * (f - 1) / 6.0 * g2;
}

std::complex<double> SmoothWindow::transform(double xi) const {
  return std::polar(1.0, -kTwoPi * xi / 2.0) * transform_real(xi);
}

std::complex<double> SmoothWindow::transform_direct(double xi) const {
  auto m = static_cast<std::int64_t>(samples_.size());
  while (static_cast<double>(m) < 8.0 * std::abs(xi)) m <<= 1;
  const bool reuse = m == static_cast<std::int64_t>(samples_.size());
  const double md = static_cast<double>(m);
  double re = 0.0, im = 0.0;
  for (std::int64_t j = 0; j < m; ++j) {
    const double t = static_cast<double>(j) / md;
    const double v = reuse ? samples_[static_cast<std::size_t>(j)] : window_value(eps_, t);
    if (v == 0.0) continue;
    // Reduce xi t modulo 1 before taking the angle.
    double ph = std::fmod(xi * t, 1.0);
    re += v * std::cos(kTwoPi * ph);
    im -= v * std::sin(kTwoPi * ph);
  }
  return {re / md, im / md};
}

std::complex<double> SmoothWindow::mellin(std::complex<double> w) const {
  const auto m = static_cast<std::int64_t>(samples_.size());
  const double md = static_cast<double>(m);
  std::complex<double> acc = 0.0;
  for (std::int64_t j = 1; j < m; ++j) {
    const double v = samples_[static_cast<std::size_t>(j)];
    if (v == 0.0) continue;
    const double y = static_cast<double>(j) / md;
    acc += v * std::exp((w - 1.0) * std::log(y));
  }
  return acc / md;
}

double SmoothWindow::decay_constant(int A) const {
  switch (A) {
    case 1: return c1_;
    case 2: return c2_;
    case 4: return c4_;
    default: throw PreconditionError("decay_constant: A must be 1, 2 or 4");
  }
}

nlohmann::json SmoothWindow::to_json() const {
  return {{"eps", eps_},
          {"integral", integral_},
          {"integral_sq", integral_sq_},
          {"xi_step", xi_step_},
          {"xi_max", xi_max_},
          {"decay", {{"C1", c1_}, {"C2", c2_}, {"C4", c4_}}}};
}

}  // namespace apvar
