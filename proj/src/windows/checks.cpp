#include <cmath>
#include <numeric>

#include "apvar/circle.hpp"
#include "apvar/simd/kernels.hpp"
#include "apvar/windows.hpp"

namespace apvar {

LemmaMajorCheck check_lemma_major(const Sequence& tilde, const WeightSet& w, const SmoothWindow& phi,
                                  std::int64_t a, std::int64_t q, double beta) {
  require(q >= 1 && static_cast<double>(q) <= w.R, "check_lemma_major: need 1 <= q <= R");
  require(std::gcd(a, q) == 1, "check_lemma_major: need (a, q) = 1");
  require(std::abs(beta) <= 1.0 / (2.0 * static_cast<double>(q) * w.R) * (1 + 1e-12),
          "check_lemma_major: need |beta| <= 1/(2qR)");
  const auto n = tilde.size();
  const double nd = static_cast<double>(n);
  LemmaMajorCheck c;
  const double alpha = static_cast<double>(a) / static_cast<double>(q) + beta;
  c.lhs = eval_exp_sum(tilde, alpha);
  c.rhs = nd * phi.transform(-nd * beta) * weight_sum_q(w, q);
  c.error = std::abs(c.lhs - c.rhs);
  c.scale = w.B * w.R * std::log(nd);
  c.constant = c.scale > 0 ? c.error / c.scale : 0.0;
  return c;
}

Lemma5Check check_lemma5(const Sequence& seq, const WeightSet& w, const SmoothWindow& phi) {
  const auto n = seq.size();
  require(w.R <= static_cast<double>(n), "check_lemma5: R must not exceed N");
  const auto tilde = build_tilde_sequence(n, w, phi);
  Lemma5Check c;
  c.lhs = simd::dot(seq.values(), tilde.values());

  const auto mult = window_multiplier(n, phi);
  const auto corr = ramanujan_correlations(seq, w.r_max(), mult);
  const auto sums = weight_sums(w);
  double rhs = 0.0, comp = 0.0;
  for (std::int64_t q = 1; q <= w.r_max(); ++q) {
    const double term = sums[static_cast<std::size_t>(q - 1)] * corr[static_cast<std::size_t>(q - 1)];
    const double t = rhs + term;
    comp += std::abs(rhs) >= std::abs(term) ? (rhs - t) + term : (term - t) + rhs;
    rhs = t;
  }
  c.rhs = rhs + comp;
  const double scale = std::max({std::abs(c.lhs), std::abs(c.rhs), 1e-300});
  c.residual = (c.lhs == c.rhs) ? 0.0 : std::abs(c.lhs - c.rhs) / scale;
  return c;
}

Calibration calibrate_52(const SieveTable& table, const Sequence& tilde, const WeightSet& w,
                         const SmoothWindow& phi) {
  const auto n = tilde.size();
  require(table.n_max >= n, "calibrate_52: sieve table too short");
  Calibration c;
  const auto lam = table.lambda_sequence();
  c.value = simd::dot(std::span<const double>(lam.values().data(), static_cast<std::size_t>(n)), tilde.values());
  c.main_term = static_cast<double>(n) * std::log(w.R) * phi.integral();
  c.error = c.value - c.main_term;
  c.error_over_n = c.error / static_cast<double>(n);
  return c;
}

Calibration calibrate_53(const Sequence& tilde, const WeightSet& w, const SmoothWindow& phi) {
  const auto n = tilde.size();
  Calibration c;
  c.value = tilde.sum_squares();
  c.main_term = static_cast<double>(n) * std::log(w.R) * phi.integral_sq();
  c.error = c.value - c.main_term;
  c.error_over_n = c.error / static_cast<double>(n);
  return c;
}

WeightSumCalibration calibrate_54(const WeightSet& w, std::int64_t q) {
  require(q >= 1 && q <= w.r_max(), "calibrate_54: need 1 <= q <= R");
  WeightSumCalibration c;
  c.q = q;
  c.value = weight_sum_q(w, q);
  c.target = static_cast<double>(moebius(q)) / static_cast<double>(euler_phi(q));
  c.deviation = std::abs(c.value - c.target);
  const double lr = std::log(w.R / static_cast<double>(q));
  c.shape = 5.0 / static_cast<double>(q) * std::exp(-0.5 * std::sqrt(std::max(lr, 0.0)));
  return c;
}

}  // namespace apvar
