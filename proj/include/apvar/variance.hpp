#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "apvar/arith.hpp"
#include "apvar/rational.hpp"

namespace apvar {

enum class VarianceMethod {
  kDirect,    // squared deviations of residue-class sums from gcd-class means
  kBilinear,  // q Sum_{m = n mod q} a_m a_n - q Sum_h |G_h|^2 / phi(q/h), divided by q
};

const char* to_string(VarianceMethod m);

/// Sequences with N at or below this use the exact path when integer-valued.
inline constexpr std::int64_t kExactPathMaxN = 10'000;

struct VarianceReport {
  std::int64_t q = 1;
  double value = 0.0;
  std::optional<Rational> exact;
  /// (h, contribution of the classes with (a,q) = h); direct method only.
  std::vector<std::pair<std::int64_t, double>> per_class_terms;
  VarianceMethod method = VarianceMethod::kDirect;

  nlohmann::json to_json() const;
};

struct ExpVarianceReport {
  std::int64_t q = 1;
  double value = 0.0;
  std::optional<Rational> exact;
};

/// V(q; A). Exact when the sequence is integer-valued and N <= kExactPathMaxN.
VarianceReport variance_mod_q(const Sequence& seq, std::int64_t q,
                              VarianceMethod method = VarianceMethod::kDirect);
Rational variance_exact(const Sequence& seq, std::int64_t q,
                        VarianceMethod method = VarianceMethod::kDirect);
double variance_float(const Sequence& seq, std::int64_t q,
                      VarianceMethod method = VarianceMethod::kDirect);

/// Sum_{q <= Q} V(q; A), parallel over q with a serial reduction.
double variance_total(const Sequence& seq, std::int64_t q_max);

/// Sum_{m = n mod q} a_m a_n = Sum over residues of the squared class sums.
Rational diagonal_sum_exact(const Sequence& seq, std::int64_t q);
double diagonal_sum(const Sequence& seq, std::int64_t q);

/// H(q; A) through the Ramanujan bilinear form
///   Sum_{m,n} a_m a_n c_q(m - n) = Sum_{e | q} e mu(q/e) Sum_{m = n mod e} a_m a_n,
/// minus |Sum a_n c_q(n)|^2 / phi(q).
ExpVarianceReport exp_variance_H(const Sequence& seq, std::int64_t q);
Rational exp_variance_exact(const Sequence& seq, std::int64_t q);
double exp_variance_float(const Sequence& seq, std::int64_t q);

/// Sum_{(a,q)=1} |A(a/q)|^2 via the same bilinear form (no subtraction).
double reduced_energy(const Sequence& seq, std::int64_t q);

struct IdentityCheck {
  bool ok = false;
  bool exact = false;
  double residual = 0.0;              // |q V - Sum_{d|q} H(d)|
  std::vector<std::int64_t> bad_divisors;  // d where H(d) disagrees with its Moebius inversion
};

/// q V(q) = Sum_{d | q} H(d). Exact equality on the exact path; otherwise
/// the residual must be below 1e-6 q V.
IdentityCheck check_identity_prop1(const Sequence& seq, std::int64_t q);

/// Lower bound for q V(q):
///   Sum_{a mod q, q/(a,q) > Q0} |A(a/q)|^2 - Sum_{d | q, d > Q0} |Sum a_n c_d(n)|^2 / phi(d).
double cor1_lower_bound(const Sequence& seq, std::int64_t q, std::int64_t q0);

struct PsiCounts {
  std::int64_t q = 1;
  std::vector<std::int64_t> residues;  // a with (a, q) = 1, ascending
  std::vector<double> psi;             // psi(N; q, a) aligned with residues
  double psi_q = 0.0;                  // Sum_{n <= N, (n,q)=1} Lambda(n)
  double restricted_variance = 0.0;    // Sum_{(a,q)=1} (psi(N;q,a) - psi_q/phi(q))^2
};

PsiCounts psi_counts(const SieveTable& table, std::int64_t q);

/// Per-modulus statistics for q = 1..q_max in one sweep (float path).
struct ModulusProfile {
  std::vector<double> variance;             // V(q), index q - 1
  std::vector<double> diagonal;             // Sum_{m = n mod q} a_m a_n
  std::vector<double> restricted_variance;  // (a,q) = 1 classes only
};

/// Profile over 1..q_max. Sparse sequences iterate their support only.
ModulusProfile modulus_profile(const Sequence& seq, std::int64_t q_max, bool with_full_variance = true);

}  // namespace apvar
