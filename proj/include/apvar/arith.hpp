#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apvar/common.hpp"
#include "apvar/rational.hpp"

namespace apvar {

/// Finite coefficient array (a_n) indexed by n = 1..N.
///
/// Values are held as doubles. An integer-valued sequence additionally
/// guarantees every coefficient is an integer of magnitude below 2^53, so
/// the exact-rational code paths can recover it losslessly.
class Sequence {
 public:
  Sequence() = default;
  Sequence(std::string name, std::vector<double> coeffs, bool integer_valued);

  static Sequence from_integers(std::string name, std::span<const std::int64_t> coeffs);
  static Sequence zeros(std::int64_t n, std::string name = "zero");
  static Sequence constant(std::int64_t n, double value, std::string name = "const");

  std::int64_t size() const { return static_cast<std::int64_t>(coeffs_.size()); }
  bool empty() const { return coeffs_.empty(); }
  bool is_integer_valued() const { return integer_valued_; }
  const std::string& name() const { return name_; }

  /// a_n for 1 <= n <= N.
  double operator[](std::int64_t n) const { return coeffs_[static_cast<std::size_t>(n - 1)]; }
  /// Exact value; requires an integer-valued sequence.
  std::int64_t integer(std::int64_t n) const;
  std::vector<std::int64_t> integers() const;

  /// Contiguous view; element i holds a_{i+1}.
  std::span<const double> values() const { return coeffs_; }

  double sum() const;
  double sum_squares() const;
  double sum_abs() const;

 private:
  std::string name_;
  std::vector<double> coeffs_;
  bool integer_valued_ = false;
};

/// Tables of standard arithmetic functions on 1..N.
struct SieveTable {
  std::int64_t n_max = 0;
  int k_max = 2;
  std::vector<double> lambda;                  // von Mangoldt, slot 0 unused
  std::vector<std::int8_t> mu;                 // Moebius
  std::vector<std::uint32_t> phi;              // Euler totient
  std::vector<std::uint32_t> spf;              // smallest prime factor, spf(1) = 1
  std::vector<std::vector<std::uint64_t>> dk;  // dk[j - 2] holds d_j for 2 <= j <= k_max

  double von_mangoldt(std::int64_t n) const { return lambda[static_cast<std::size_t>(n)]; }
  int moebius(std::int64_t n) const { return mu[static_cast<std::size_t>(n)]; }
  std::uint64_t totient(std::int64_t n) const { return phi[static_cast<std::size_t>(n)]; }
  std::uint64_t smallest_prime_factor(std::int64_t n) const { return spf[static_cast<std::size_t>(n)]; }
  /// d_j(n); d_1 = 1 is accepted for convenience.
  std::uint64_t divisor_k(int j, std::int64_t n) const;

  Sequence lambda_sequence() const;
  Sequence divisor_sequence(int j) const;
};

/// Segmented multiplicative sieve; segments of length min(N, 2^22).
SieveTable sieve_all(std::int64_t n_max, int k_max);

/// Primes p <= n.
std::vector<std::uint32_t> primes_up_to(std::int64_t n);

using Factorization = std::vector<std::pair<std::int64_t, int>>;

/// Trial-division factorization of n >= 1 (empty for n == 1).
Factorization factorize(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
int moebius(std::int64_t n);
bool is_squarefree(std::int64_t n);
/// d_k(n) computed from the factorization; k >= 1.
std::uint64_t divisor_k(int k, std::int64_t n);
/// C(n, r) in 64-bit arithmetic; throws on overflow.
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t r);

/// c_q(n) = mu(q/(q,n)) phi(q) / phi(q/(q,n)); n may be zero or negative.
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n);

/// Sum_{n<=N} a_n c_d(n) w_n, with w_n = 1 when no multiplier is given.
/// `multiplier` holds w_1..w_N in the same layout as Sequence::values().
double ramanujan_correlation(const Sequence& seq, std::int64_t d,
                             std::span<const double> multiplier = {});
/// Exact Sum_{n<=N} a_n c_d(n) for an integer-valued sequence.
Rational ramanujan_correlation_exact(const Sequence& seq, std::int64_t d);

/// All correlations Sum_n a_n w_n c_d(n) for d = 1..d_max in O(N log d_max).
/// Uses c_d(n) = Sum_{e | (d,n)} e mu(d/e) over multiples-of-e partial sums.
/// Element d - 1 of the result holds the value for d.
std::vector<double> ramanujan_correlations(const Sequence& seq, std::int64_t d_max,
                                           std::span<const double> multiplier = {});

/// x (x-1) ... (x-j+1) / j!, x any integer.
Rational gen_binomial(std::int64_t x, unsigned j);
double gen_binomial_double(double x, unsigned j);

}  // namespace apvar
