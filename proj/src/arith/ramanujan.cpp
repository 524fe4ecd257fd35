#include <numeric>

#include "apvar/arith.hpp"

namespace apvar {

namespace {

std::vector<std::int8_t> moebius_table(std::int64_t n) {
  std::vector<std::int8_t> mu(static_cast<std::size_t>(n + 1), 1);
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  mu[0] = 0;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    for (std::int64_t m = p; m <= n; m += p) {
      if (m > p) composite[static_cast<std::size_t>(m)] = true;
      mu[static_cast<std::size_t>(m)] = static_cast<std::int8_t>(-mu[static_cast<std::size_t>(m)]);
    }
    if (p <= n / p) {
      for (std::int64_t m = p * p; m <= n; m += p * p) mu[static_cast<std::size_t>(m)] = 0;
    }
  }
  return mu;
}

}  // namespace

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t n) {
  require(q >= 1, "ramanujan_sum: q must be >= 1");
  const std::int64_t g = std::gcd(q, n < 0 ? -n : n);  // gcd(q, 0) = q
  const std::int64_t m = q / g;
  const int mu = moebius(m);
  if (mu == 0) return 0;
  return mu * (euler_phi(q) / euler_phi(m));
}

double ramanujan_correlation(const Sequence& seq, std::int64_t d, std::span<const double> multiplier) {
  require(d >= 1, "ramanujan_correlation: d must be >= 1");
  require(multiplier.empty() || static_cast<std::int64_t>(multiplier.size()) == seq.size(),
          "ramanujan_correlation: multiplier length mismatch");
  const std::int64_t n_max = seq.size();
  double total = 0.0;
  for (std::int64_t e : divisors(d)) {
    const int mu = moebius(d / e);
    if (mu == 0) continue;
    double s = 0.0;
    for (std::int64_t n = e; n <= n_max; n += e) {
      s += multiplier.empty() ? seq[n] : seq[n] * multiplier[static_cast<std::size_t>(n - 1)];
    }
    total += static_cast<double>(mu * e) * s;
  }
  return total;
}

Rational ramanujan_correlation_exact(const Sequence& seq, std::int64_t d) {
  require(d >= 1, "ramanujan_correlation_exact: d must be >= 1");
  require(seq.is_integer_valued(), "ramanujan_correlation_exact: sequence must be integer-valued");
  const std::int64_t n_max = seq.size();
  mpz_class total = 0;
  for (std::int64_t e : divisors(d)) {
    const int mu = moebius(d / e);
    if (mu == 0) continue;
    mpz_class s = 0;
    for (std::int64_t n = e; n <= n_max; n += e) s += static_cast<long>(seq.integer(n));
    total += s * static_cast<long>(mu * e);
  }
  return Rational(mpq_class(total));
}

std::vector<double> ramanujan_correlations(const Sequence& seq, std::int64_t d_max,
                                           std::span<const double> multiplier) {
  require(d_max >= 1, "ramanujan_correlations: d_max must be >= 1");
  require(multiplier.empty() || static_cast<std::int64_t>(multiplier.size()) == seq.size(),
          "ramanujan_correlations: multiplier length mismatch");
  const std::int64_t n_max = seq.size();
  const auto mu = moebius_table(d_max);
  std::vector<double> multiples(static_cast<std::size_t>(d_max + 1), 0.0);
  parallel_for(1, d_max + 1, [&](std::int64_t e) {
    double s = 0.0;
    for (std::int64_t n = e; n <= n_max; n += e) {
      s += multiplier.empty() ? seq[n] : seq[n] * multiplier[static_cast<std::size_t>(n - 1)];
    }
    multiples[static_cast<std::size_t>(e)] = s;
  });
  std::vector<double> out(static_cast<std::size_t>(d_max), 0.0);
  for (std::int64_t e = 1; e <= d_max; ++e) {
    const double se = static_cast<double>(e) * multiples[static_cast<std::size_t>(e)];
    for (std::int64_t d = e, j = 1; d <= d_max; d += e, ++j) {
      const int m = mu[static_cast<std::size_t>(j)];
      if (m != 0) out[static_cast<std::size_t>(d - 1)] += m * se;
    }
  }
  return out;
}

Rational gen_binomial(std::int64_t x, unsigned j) {
  mpz_class num = 1, den = 1;
  for (unsigned i = 0; i < j; ++i) {
    num *= static_cast<long>(x - static_cast<std::int64_t>(i));
    den *= static_cast<long>(i + 1);
  }
  return Rational(mpq_class(num, den));
}

double gen_binomial_double(double x, unsigned j) {
  double r = 1.0;
  for (unsigned i = 0; i < j; ++i) r *= (x - i) / (i + 1);
  return r;
}

}  // namespace apvar
