#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "apvar/arith.hpp"

namespace apvar {

/// Smooth approximation from below to the indicator of [0, 1].
///
/// Phi(t) = rho((t - e/4) / (e/4)) rho((1 - e/4 - t) / (e/4)) with the C-infinity
/// cutoff rho(x) = psi(x) / (psi(x) + psi(1 - x)), psi(x) = exp(-1/x). The support
/// is [e/4, 1 - e/4], Phi = 1 on [e/2, 1 - e/2], and int Phi = 1 - 3e/4.
///
/// Phi is symmetric about 1/2, so Phi^(xi) = e(-xi/2) g(xi) with g real and
/// even; g is tabulated by a zero-padded FFT on the grid xi = k/256 and
/// interpolated with four-point Lagrange stencils.
class SmoothWindow {
 public:
  struct Options {
    int log2_samples = 14;  // samples of Phi on [0, 1)
    int log2_padding = 8;   // xi step is 2^-log2_padding
  };

  static SmoothWindow build(double eps);
  static SmoothWindow build(double eps, const Options& opt);

  double eps() const { return eps_; }
  double operator()(double t) const;

  /// Phi^(xi) = int Phi(t) e(-xi t) dt.
  std::complex<double> transform(double xi) const;
  /// g(xi) = e(xi/2) Phi^(xi).
  double transform_real(double xi) const;
  /// Trapezoid quadrature without the table (the interpolation oracle).
  std::complex<double> transform_direct(double xi) const;
  /// int_0^1 Phi(y) y^(w-1) dy.
  std::complex<double> mellin(std::complex<double> w) const;

  double integral() const { return integral_; }
  double integral_sq() const { return integral_sq_; }
  double tabulated_range() const { return xi_max_; }
  /// Smallest C with |Phi^(xi)| <= C (1 + |xi|)^-A on the table, A in {1, 2, 4}.
  double decay_constant(int A) const;

  nlohmann::json to_json() const;

 private:
  double eps_ = 0.05;
  double xi_step_ = 1.0 / 256.0;
  double xi_max_ = 0.0;
  std::vector<double> samples_;  // Phi(j / M)
  std::vector<double> table_;    // g(k xi_step)
  double integral_ = 0.0;
  double integral_sq_ = 0.0;
  double c1_ = 0.0, c2_ = 0.0, c4_ = 0.0;
};

/// rho(x): 0 for x <= 0, 1 for x >= 1, smooth monotone in between.
double smooth_step(double x);

enum class WeightKind { kPrimeSieve, kDivisor };
const char* to_string(WeightKind k);

/// Truncated sieve coefficients b_r for r <= R (zero beyond).
struct WeightSet {
  WeightKind kind = WeightKind::kPrimeSieve;
  double R = 2.0;                // may be non-integer; r runs over 1..floor(R)
  int k = 2;                     // divisor kind: b_r = d_{k-1}(r)
  std::vector<double> b;         // b[r - 1]
  double B = 0.0;                // max |b_r|

  std::int64_t r_max() const { return static_cast<std::int64_t>(b.size()); }
  double operator()(std::int64_t r) const {
    return r >= 1 && r <= r_max() ? b[static_cast<std::size_t>(r - 1)] : 0.0;
  }
  /// "r,b_r" rows with a header line.
  void write_csv(std::ostream& os) const;
};

/// prime_sieve: b_r = mu(r) log(R/r); divisor: b_r = d_{k-1}(r).
WeightSet build_weights(WeightKind kind, double R, int k = 2);

/// a~_n = Phi(n/N) Sum_{r | n, r <= R} b_r, by a divisor-sum sieve.
Sequence build_tilde_sequence(std::int64_t n, const WeightSet& w, const SmoothWindow& phi);

/// Sum_{r <= R, q | r} b_r / r; zero for q > R.
double weight_sum_q(const WeightSet& w, std::int64_t q);
/// All weight sums for q = 1..floor(R); element q - 1.
std::vector<double> weight_sums(const WeightSet& w);

struct LemmaMajorCheck {
  std::complex<double> lhs;  // A~(a/q + beta), direct
  std::complex<double> rhs;  // N Phi^(-N beta) Sum_{q|r} b_r / r
  double error = 0.0;        // |lhs - rhs|
  double scale = 0.0;        // B R log N
  double constant = 0.0;     // error / scale, the empirical C
};

/// Requires |beta| <= 1/(2qR), q <= R, (a, q) = 1.
LemmaMajorCheck check_lemma_major(const Sequence& tilde, const WeightSet& w, const SmoothWindow& phi,
                                  std::int64_t a, std::int64_t q, double beta);

struct Lemma5Check {
  double lhs = 0.0;  // Sum a_n a~_n
  double rhs = 0.0;  // Sum_{q<=R} (Sum_{q|r} b_r/r) Sum_n a_n c_q(n) Phi(n/N)
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|, tiny)
};

Lemma5Check check_lemma5(const Sequence& seq, const WeightSet& w, const SmoothWindow& phi);

/// Phi(n/N) for n = 1..N.
std::vector<double> window_multiplier(std::int64_t n, const SmoothWindow& phi);

struct Calibration {
  double value = 0.0;      // computed sum
  double main_term = 0.0;  // predicted main term
  double error = 0.0;      // value - main_term
  double error_over_n = 0.0;
};

/// Sum Lambda(n) a~_n against N log R int Phi (prime-sieve weights).
Calibration calibrate_52(const SieveTable& table, const Sequence& tilde, const WeightSet& w,
                         const SmoothWindow& phi);
/// Sum a~_n^2 against N log R int Phi^2.
Calibration calibrate_53(const Sequence& tilde, const WeightSet& w, const SmoothWindow& phi);

struct WeightSumCalibration {
  std::int64_t q = 1;
  double value = 0.0;      // weight_sum_q
  double target = 0.0;     // mu(q)/phi(q)
  double deviation = 0.0;  // |value - target|
  double shape = 0.0;      // (5/q) exp(-0.5 sqrt(log(R/q)))
};

WeightSumCalibration calibrate_54(const WeightSet& w, std::int64_t q);

}  // namespace apvar
