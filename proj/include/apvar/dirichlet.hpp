#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "apvar/arith.hpp"
#include "apvar/rational.hpp"

namespace apvar {

using cplx = std::complex<double>;

/// zeta(s) by Euler-Maclaurin with 16 direct terms and 50 Bernoulli
/// corrections. Accurate to ~1e-15 relative for |s - 1| <= 4; throws at s = 1.
cplx zeta_near_one(cplx s);

/// B_{2j} / (2j)! for j = 1..50, from exact Bernoulli numbers.
double bernoulli_ratio(int j);

/// p-local factors of F_q(s) and G_q(s) for fixed q and k.
///
/// F_q(s) = Prod_{p^a || q} (1 - p^-s)^k ( -d_k(p^(a-1)) p^(-(a-1)(s-1)) + phi(p^a) Sum_{b>=a} d_k(p^b) p^(-bs) )
/// G_q(s) = Prod_{p^a || q} (1 - p^-s)^(k-1) Sum_{b>=a} d_{k-1}(p^b) p^(-bs)
///
/// The inner series start with `min_terms` terms and are extended until the
/// geometric tail bound drops below 1e-14 of the partial sum; AccuracyError
/// if that needs more than `max_terms`.
class LocalFactorSet {
 public:
  LocalFactorSet(std::int64_t q, int k, int min_terms = 60, int max_terms = 20000);

  std::int64_t q() const { return q_; }
  int k() const { return k_; }
  const Factorization& factorization() const { return factors_; }

  cplx F(cplx s) const;
  cplx G(cplx s) const;
  /// Largest relative tail bound seen by the last F/G evaluation.
  double last_tail() const { return last_tail_; }
  int last_terms() const { return last_terms_; }

 private:
  cplx tail_series(std::int64_t p, int a, int j, cplx s) const;

  std::int64_t q_;
  int k_;
  int min_terms_;
  int max_terms_;
  Factorization factors_;
  mutable double last_tail_ = 0.0;
  mutable int last_terms_ = 0;
};

cplx euler_F_q(std::int64_t q, int k, cplx s);
cplx euler_G_q(std::int64_t q, int k, cplx s);
/// Prod_{p | q} (p - 1 - p (1 - p^-s)^k), valid for squarefree q.
cplx euler_F_q_squarefree(std::int64_t q, int k, cplx s);

struct ResiduePrediction {
  double value = 0.0;
  double radius = 0.0;
  int nodes = 0;
  double error = 0.0;  // |value(nodes) - value(2 nodes)|

  nlohmann::json to_json() const;
};

/// (1/2 pi i) contour integral of f over |s - centre| = radius by the
/// trapezoid rule, with the node-doubling error estimate. Throws
/// AccuracyError when the estimate exceeds `tolerance` relative.
ResiduePrediction contour_residue(const std::function<cplx(cplx)>& f, cplx centre, double radius,
                                  int nodes = 64, double tolerance = 1e-8);

/// Res_{s=1} zeta(s)^k F_q(s) N^s / s, the prediction for Sum_{n<=N} d_k(n) c_q(n).
ResiduePrediction residue_dk_correlation(std::int64_t q, int k, double n);
/// Res_{s=0} zeta(s+1)^(k-1) G_q(s+1) x^s / s, the prediction for Sum_{n<=x, q|n} d_{k-1}(n)/n.
ResiduePrediction residue_divisor_mean(std::int64_t q, int k, double x);

struct SingularConstant {
  double product = 0.0;  // Prod_{p<=P} (1 - 1/p)^(k^2) Sum_a d_k(p^a)^2 / p^a
  double c_k = 0.0;      // product / (k^2 - 1)!
  double tail_estimate = 0.0;  // bound on |full product - truncated product|
  std::int64_t prime_cap = 0;
};

SingularConstant singular_constant(int k, std::int64_t prime_cap);

/// The double sum over l, j in {0..k-1} of generalized binomials times powers
/// of log N, log R and the bracketed difference of powers of log R, log KQ0.
double polynomial_69(int k, double log_n, double log_r, double log_kq0);
/// Same formula without the range precondition.
double polynomial_69_unchecked(int k, double log_n, double log_r, double log_kq0);

/// Coefficient of alpha^(k^2-1) in polynomial_69 / (log N)^(k^2-1), alpha = log R / log N,
/// summed from the l = k-1 terms with exact generalized binomials.
Rational leading_coefficient_69(int k);
/// (-1)^(k-1) / ((k-1)! (k(k-1)-1)! (k^2-1)).
Rational leading_coefficient_69_closed(int k);

struct ChebyshevChoice {
  double R = 0.0;
  double alpha = 0.0;
  double value = 0.0;          // polynomial_69 at the chosen alpha
  double alpha_lo = 0.0, alpha_hi = 0.0;
  double floor = 0.0;          // (len/4)^n |lead| (log N)^n 2^-(n-1), n = k^2 - 1
  double sharp_floor = 0.0;    // 2 |lead| (len/4)^n (log N)^n
  bool certified = false;      // |value| >= floor
  int grid_points = 0;
  std::vector<std::pair<double, double>> grid;  // (alpha, value)
};

ChebyshevChoice choose_R_chebyshev(int k, double n, double q0, double q, double K, double eps,
                                   int grid_points = 512);

/// f_q^(j)(1) for j = 0..m, f_q = F_q'/F_q, q squarefree. j = 0 uses the closed
/// form; higher orders use a Cauchy integral of log F_q on |s - 1| = radius.
struct LogDerivatives {
  std::vector<double> values;
  double radius = 0.05;
  std::vector<double> shape_constants;  // |f^(j)(1)| / Sum_{p|q} (log p)^(j+1)
};

LogDerivatives f_q_log_derivatives(std::int64_t q, int k, int m);
/// Closed form -Sum_{p|q} k log p / (p-1) { (1-1/p)^-(k-1) - 1 }^-1.
double f_q_at_one(std::int64_t q, int k);

struct Fq1Bound {
  bool holds = false;
  Rational lhs;  // F_q(1)
  Rational rhs;  // d_{k-1}(q) (phi(q)/q)^k
};

/// Exact comparison F_q(1) >= d_{k-1}(q) (phi(q)/q)^k for squarefree q.
Fq1Bound check_Fq1_bound(std::int64_t q, int k);

struct RamdkevalResult {
  double residue = 0.0;    // Res_{s=1} zeta^k F_q(s)/F_q(1) N^(s-1)/s
  double main_term = 0.0;  // (log N + f_q(1))^(k-1) / (k-1)!
  double ratio = 0.0;      // residue / main_term
  double scaled = 0.0;     // residue / (log N)^(k-1), the empirical c'
  double error = 0.0;
};

/// Requires q squarefree, q <= N^(1/2 - delta/2), all p | q at most N^smooth_exp.
RamdkevalResult residue_ramdkeval(std::int64_t q, int k, double n, double delta = 0.1,
                                  double smooth_exp = 0.25);
bool ramdkeval_admissible(std::int64_t q, double n, double delta = 0.1, double smooth_exp = 0.25);

}  // namespace apvar
