#include <cmath>

#include "apvar/dirichlet.hpp"

namespace apvar {

namespace {

constexpr double kTailTarget = 1e-14;

double binom_double(int n, int r) {
  double v = 1.0;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

}  // namespace

LocalFactorSet::LocalFactorSet(std::int64_t q, int k, int min_terms, int max_terms)
    : q_(q), k_(k), min_terms_(min_terms), max_terms_(max_terms) {
  require(q >= 1, "LocalFactorSet: q must be >= 1");
  require(k >= 2, "LocalFactorSet: k must be >= 2");
  require(min_terms >= 1 && max_terms >= min_terms, "LocalFactorSet: bad term limits");
  factors_ = factorize(q);
}

// Sum_{b >= a} d_j(p^b) p^(-b s), d_j(p^b) = C(b + j - 1, j - 1). The absolute
// tail bound is returned through last_tail_ (relative to |sum|).
cplx LocalFactorSet::tail_series(std::int64_t p, int a, int j, cplx s) const {
  require(s.real() > 0.0, "Euler factor: requires Re(s) > 0");
  const cplx x = std::exp(-s * std::log(static_cast<double>(p)));
  const double ax = std::abs(x);
  cplx term = binom_double(a + j - 1, j - 1) * std::pow(x, a);
  cplx sum = 0.0;
  int b = a;
  int used = 0;
  double tail = 0.0;
  while (true) {
    sum += term;
    ++used;
    // Next term and the ratio bound for everything after it.
    const double ratio_next = (static_cast<double>(b + j) / static_cast<double>(b + 1)) * ax;
    term *= ratio_next / ax * x;
    ++b;
    if (used >= min_terms_) {
      const double rho = (static_cast<double>(b + j) / static_cast<double>(b + 1)) * ax;
      tail = rho < 1.0 ? std::abs(term) / (1.0 - rho) : INFINITY;
      if (tail <= kTailTarget * std::abs(sum)) break;
      if (used >= max_terms_) {
        throw AccuracyError("Euler factor: tail bound " + std::to_string(tail / std::abs(sum)) +
                            " above 1e-14 after " + std::to_string(used) + " terms (p=" + std::to_string(p) + ")");
      }
    }
  }
  last_tail_ = std::max(last_tail_, tail / std::abs(sum));
  last_terms_ = std::max(last_terms_, used);
  return sum;
}

cplx LocalFactorSet::F(cplx s) const {
  last_tail_ = 0.0;
  last_terms_ = 0;
  cplx prod = 1.0;
  for (auto [p, a] : factors_) {
    const double lp = std::log(static_cast<double>(p));
    const cplx x = std::exp(-s * lp);
    const double phi_pa = std::pow(static_cast<double>(p), a - 1) * static_cast<double>(p - 1);
    const cplx head = binom_double(a - 1 + k_ - 1, k_ - 1) * std::exp(-static_cast<double>(a - 1) * (s - 1.0) * lp);
    const cplx bracket = -head + phi_pa * tail_series(p, a, k_, s);
    prod *= std::pow(1.0 - x, k_) * bracket;
  }
  return prod;
}

cplx LocalFactorSet::G(cplx s) const {
  last_tail_ = 0.0;
  last_terms_ = 0;
  cplx prod = 1.0;
  for (auto [p, a] : factors_) {
    const cplx x = std::exp(-s * std::log(static_cast<double>(p)));
    prod *= std::pow(1.0 - x, k_ - 1) * tail_series(p, a, k_ - 1, s);
  }
  return prod;
}

cplx euler_F_q(std::int64_t q, int k, cplx s) { return LocalFactorSet(q, k).F(s); }

cplx euler_G_q(std::int64_t q, int k, cplx s) { return LocalFactorSet(q, k).G(s); }

cplx euler_F_q_squarefree(std::int64_t q, int k, cplx s) {
  require(is_squarefree(q), "euler_F_q_squarefree: q must be squarefree");
  cplx prod = 1.0;
  for (auto [p, a] : factorize(q)) {
    const double pd = static_cast<double>(p);
    prod *= (pd - 1.0) - pd * std::pow(1.0 - std::exp(-s * std::log(pd)), k);
  }
  return prod;
}

}  // namespace apvar
