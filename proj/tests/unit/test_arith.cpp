#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "apvar/arith.hpp"

using namespace apvar;

namespace {

std::int64_t phi_brute(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t a = 1; a <= n; ++a) c += std::gcd(a, n) == 1;
  return c;
}

int mu_brute(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return sign;
}

// d_k(n) = #{(x_1..x_k) : x_1...x_k = n}
std::uint64_t dk_brute(int k, std::int64_t n) {
  if (k == 1) return 1;
  std::uint64_t c = 0;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) c += dk_brute(k - 1, n / d);
  return c;
}

double lambda_brute(std::int64_t n) {
  for (std::int64_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return 0.0;
}

std::complex<double> ramanujan_exp(std::int64_t q, std::int64_t n) {
  std::complex<double> s = 0.0;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((a * n) % q) / static_cast<double>(q));
  }
  return s;
}

}  // namespace

TEST(Sieve, SmallExamples) {
  const auto t = sieve_all(10, 2);
  const std::vector<std::uint64_t> d2 = {1, 2, 2, 3, 2, 4, 2, 4, 3, 4};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(t.divisor_k(2, n), d2[n - 1]) << n;
  const std::vector<int> mu = {1, -1, -1, 0, -1, 1};
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(t.moebius(n), mu[n - 1]) << n;
}

TEST(Sieve, EmptyProductConventions) {
  const auto t = sieve_all(1, 3);
  EXPECT_EQ(t.von_mangoldt(1), 0.0);
  EXPECT_EQ(t.divisor_k(2, 1), 1u);
  EXPECT_EQ(t.divisor_k(3, 1), 1u);
  EXPECT_EQ(t.totient(1), 1u);
}

TEST(Sieve, MatchesTrialDivisionOracles) {
  const auto t = sieve_all(600, 4);
  for (std::int64_t n = 1; n <= 600; ++n) {
    ASSERT_EQ(static_cast<std::int64_t>(t.totient(n)), phi_brute(n)) << n;
    ASSERT_EQ(t.moebius(n), mu_brute(n)) << n;
    ASSERT_NEAR(t.von_mangoldt(n), lambda_brute(n), 1e-12) << n;
    for (int k = 2; k <= 4; ++k) ASSERT_EQ(t.divisor_k(k, n), dk_brute(k, n)) << "k=" << k << " n=" << n;
  }
}

TEST(Sieve, SegmentBoundaryAgreesWithPointwise) {
  const std::int64_t n = (1 << 22) + 5000;
  const auto t = sieve_all(n, 3);
  for (std::int64_t m = (1 << 22) - 3000; m <= n; m += 7) {
    ASSERT_EQ(static_cast<std::int64_t>(t.totient(m)), euler_phi(m)) << m;
    ASSERT_EQ(t.moebius(m), moebius(m)) << m;
    ASSERT_EQ(t.divisor_k(3, m), divisor_k(3, m)) << m;
    const auto f = factorize(m);
    ASSERT_EQ(static_cast<std::int64_t>(t.smallest_prime_factor(m)), f.front().first) << m;
  }
}

TEST(Sieve, ChebyshevPsiScale) {
  const auto t = sieve_all(100000, 2);
  double psi = 0.0;
  for (std::int64_t n = 1; n <= 100000; ++n) psi += t.von_mangoldt(n);
  EXPECT_NEAR(psi / 100000.0, 1.0, 0.01);
}

TEST(Arith, PrimesAndFactorization) {
  EXPECT_EQ(primes_up_to(30), (std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
  EXPECT_TRUE(primes_up_to(1).empty());
  EXPECT_EQ(factorize(360), (Factorization{{2, 3}, {3, 2}, {5, 1}}));
  EXPECT_TRUE(factorize(1).empty());
  EXPECT_EQ(divisors(12), (std::vector<std::int64_t>{1, 2, 3, 4, 6, 12}));
  EXPECT_TRUE(is_squarefree(30));
  EXPECT_FALSE(is_squarefree(12));
}

TEST(Arith, DivisorSumProperties) {
  for (std::int64_t n = 1; n <= 300; ++n) {
    std::int64_t phi_sum = 0;
    int mu_sum = 0;
    for (auto d : divisors(n)) {
      phi_sum += euler_phi(d);
      mu_sum += moebius(d);
    }
    EXPECT_EQ(phi_sum, n);
    EXPECT_EQ(mu_sum, n == 1 ? 1 : 0);
  }
}

TEST(Arith, BinomialOverflowThrows) {
  EXPECT_EQ(binomial_u64(10, 3), 120u);
  EXPECT_THROW(binomial_u64(200, 100), std::overflow_error);
}

TEST(Ramanujan, Examples) {
  for (std::int64_t n : {-7, 0, 1, 5, 100}) EXPECT_EQ(ramanujan_sum(1, n), 1);
  for (std::int64_t p : {2, 3, 5, 7, 11}) EXPECT_EQ(ramanujan_sum(p, 3 * p), p - 1);
  EXPECT_EQ(ramanujan_sum(4, 2), -2);
}

TEST(Ramanujan, ClosedFormMatchesExponentialSum) {
  for (std::int64_t q = 1; q <= 40; ++q) {
    for (std::int64_t n = -5; n <= 80; ++n) {
      const auto z = ramanujan_exp(q, ((n % q) + q) % q);
      ASSERT_NEAR(static_cast<double>(ramanujan_sum(q, n)), z.real(), 1e-9) << q << ' ' << n;
      ASSERT_NEAR(z.imag(), 0.0, 1e-9);
    }
  }
}

TEST(Ramanujan, CorrelationExamples) {
  const std::int64_t n = 120;
  const auto ones = Sequence::constant(n, 1.0);
  for (std::int64_t d : {2, 3, 4, 5, 6, 8, 10, 12, 24, 40, 60, 120}) EXPECT_NEAR(ramanujan_correlation(ones, d), 0.0, 1e-9);

  std::mt19937_64 rng(7);
  std::vector<std::int64_t> v(200);
  for (auto& x : v) x = static_cast<std::int64_t>(rng() % 11) - 5;
  const auto seq = Sequence::from_integers("r", v);
  EXPECT_NEAR(ramanujan_correlation(seq, 1), seq.sum(), 1e-9);
  EXPECT_EQ(ramanujan_correlation_exact(seq, 1), Rational(static_cast<std::int64_t>(seq.sum())));

  const auto t = sieve_all(100, 2);
  const auto lam = t.lambda_sequence();
  std::complex<double> direct = 0.0;
  for (std::int64_t m = 1; m <= 100; ++m) direct += lam[m] * ramanujan_exp(4, m % 4);
  EXPECT_NEAR(ramanujan_correlation(lam, 4), direct.real(), 1e-9);
}

TEST(Ramanujan, BatchMatchesSingle) {
  const auto t = sieve_all(3000, 3);
  const auto seq = t.divisor_sequence(3);
  std::vector<double> mult(3000);
  for (std::size_t i = 0; i < mult.size(); ++i) mult[i] = std::sin(0.001 * static_cast<double>(i));
  const auto all = ramanujan_correlations(seq, 200, mult);
  for (std::int64_t d = 1; d <= 200; ++d) {
    const double single = ramanujan_correlation(seq, d, mult);
    ASSERT_NEAR(all[static_cast<std::size_t>(d - 1)], single, 1e-9 * (1.0 + std::abs(single))) << d;
  }
  const auto plain = ramanujan_correlations(seq, 60);
  for (std::int64_t d = 1; d <= 60; ++d) {
    ASSERT_NEAR(plain[static_cast<std::size_t>(d - 1)], ramanujan_correlation_exact(seq, d).to_double(), 1e-6) << d;
  }
}

TEST(GenBinomial, Examples) {
  EXPECT_EQ(gen_binomial(-2, 1), Rational(-2));
  EXPECT_EQ(gen_binomial(-2, 2), Rational(3));
  for (std::int64_t x : {-9, -1, 0, 4}) EXPECT_EQ(gen_binomial(x, 0), Rational(1));
  EXPECT_EQ(gen_binomial(5, 7), Rational(0));
  for (std::int64_t x = -12; x <= 12; ++x)
    for (unsigned j = 0; j <= 8; ++j) EXPECT_NEAR(gen_binomial_double(static_cast<double>(x), j), gen_binomial(x, j).to_double(), 1e-9);
}

TEST(GenBinomial, PascalRule) {
  for (std::int64_t x = -10; x <= 10; ++x)
    for (unsigned j = 1; j <= 7; ++j) EXPECT_EQ(gen_binomial(x + 1, j), gen_binomial(x, j) + gen_binomial(x, j - 1));
}

TEST(RationalType, ArithmeticAndFormatting) {
  const Rational a(1, 3), b(-1, 6);
  EXPECT_EQ(a + b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(-1, 18));
  EXPECT_EQ(a / b, Rational(-2));
  EXPECT_EQ(Rational(4, 8).str(), "1/2");
  EXPECT_EQ(Rational(-3).str(), "-3");
  EXPECT_EQ(pow(Rational(2, 3), 3), Rational(8, 27));
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(SequenceType, IntegerPath) {
  const std::vector<std::int64_t> v = {3, -1, 4, 1, -5};
  const auto s = Sequence::from_integers("s", v);
  EXPECT_TRUE(s.is_integer_valued());
  EXPECT_EQ(s.size(), 5);
  EXPECT_EQ(s.integers(), v);
  EXPECT_EQ(s.sum(), 2.0);
  EXPECT_EQ(s.sum_squares(), 52.0);
  EXPECT_EQ(s.sum_abs(), 14.0);
  const Sequence f("f", {0.5, 1.0}, false);
  EXPECT_THROW(f.integer(1), PreconditionError);
}
