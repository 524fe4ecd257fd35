#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "apvar/variance.hpp"

using namespace apvar;

namespace {

// Sum over residue classes a of (S_a - mean of classes with the same gcd)^2, exact.
Rational variance_oracle(const std::vector<std::int64_t>& v, std::int64_t q) {
  std::vector<mpq_class> s(static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < v.size(); ++i) s[(i + 1) % static_cast<std::size_t>(q)] += v[i];
  mpq_class total = 0;
  for (auto h : divisors(q)) {
    mpq_class sum = 0;
    std::int64_t count = 0;
    for (std::int64_t a = 0; a < q; ++a)
      if (std::gcd(a, q) == h) sum += s[static_cast<std::size_t>(a)], ++count;
    const mpq_class mean = sum / count;
    for (std::int64_t a = 0; a < q; ++a)
      if (std::gcd(a, q) == h) total += (s[static_cast<std::size_t>(a)] - mean) * (s[static_cast<std::size_t>(a)] - mean);
  }
  return Rational(total);
}

std::complex<double> exp_sum(const Sequence& seq, std::int64_t a, std::int64_t q) {
  std::complex<double> z = 0.0;
  for (std::int64_t n = 1; n <= seq.size(); ++n)
    z += seq[n] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((a * n) % q) / static_cast<double>(q));
  return z;
}

double h_oracle(const Sequence& seq, std::int64_t q) {
  double open = 0.0;
  for (std::int64_t a = 1; a <= q; ++a)
    if (std::gcd(a, q) == 1) open += std::norm(exp_sum(seq, a, q));
  double corr = 0.0;
  for (std::int64_t n = 1; n <= seq.size(); ++n) corr += seq[n] * static_cast<double>(ramanujan_sum(q, n));
  return open - corr * corr / static_cast<double>(euler_phi(q));
}

Sequence random_seq(std::int64_t n, std::uint64_t seed, int lo, int hi) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<std::int64_t> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = d(rng);
  return Sequence::from_integers("random", v);
}

}  // namespace

TEST(Variance, ConstantSequenceOnCompleteSystem) {
  for (std::int64_t q : {1, 2, 6, 12, 30}) {
    const auto r = variance_mod_q(Sequence::constant(q, 1.0), q);
    EXPECT_EQ(r.value, 0.0) << q;
  }
}

TEST(Variance, SingleSpikeModTwo) {
  std::vector<std::int64_t> v(10, 0);
  v[0] = 1;
  EXPECT_EQ(variance_exact(Sequence::from_integers("spike", v), 2), Rational(0));
}

TEST(Variance, MatchesClassSumOracleExactly) {
  const auto t = sieve_all(150, 3);
  for (const auto& seq : {t.divisor_sequence(2), t.divisor_sequence(3), random_seq(150, 3, -3, 3)}) {
    const auto v = seq.integers();
    for (std::int64_t q = 1; q <= 40; ++q) {
      ASSERT_EQ(variance_exact(seq, q, VarianceMethod::kDirect), variance_oracle(v, q)) << seq.name() << " q=" << q;
      ASSERT_EQ(variance_exact(seq, q, VarianceMethod::kBilinear), variance_oracle(v, q)) << seq.name() << " q=" << q;
    }
  }
}

TEST(Variance, D2ModFourEqualsDivisorSumOfH) {
  const auto seq = sieve_all(100, 2).divisor_sequence(2);
  Rational sum = 0;
  for (auto d : divisors(4)) sum += exp_variance_exact(seq, d);
  EXPECT_EQ(variance_exact(seq, 4), sum / Rational(4));
}

TEST(Variance, FloatPathTracksExact) {
  const auto seq = random_seq(2000, 11, 0, 9);
  for (std::int64_t q : {1, 7, 60, 97, 360}) {
    const double exact = variance_exact(seq, q).to_double();
    EXPECT_NEAR(variance_float(seq, q, VarianceMethod::kDirect), exact, 1e-9 * (1.0 + exact));
    EXPECT_NEAR(variance_float(seq, q, VarianceMethod::kBilinear), exact, 1e-7 * (1.0 + exact));
  }
}

TEST(VarianceTotal, ZeroAndSerialOracle) {
  EXPECT_EQ(variance_total(Sequence::zeros(500), 50), 0.0);
  const auto lam = sieve_all(10000, 2).lambda_sequence();
  double serial = 0.0;
  for (std::int64_t q = 1; q <= 100; ++q) serial += variance_mod_q(lam, q).value;
  EXPECT_NEAR(variance_total(lam, 100), serial, 1e-6 * serial);
}

TEST(VarianceTotal, DivisorMontgomeryScale) {
  for (std::int64_t n : {1000, 10000}) {
    const auto d2 = sieve_all(n, 2).divisor_sequence(2);
    const double scale = static_cast<double>(n) * static_cast<double>(n) * std::log(static_cast<double>(n));
    const double ratio = variance_total(d2, n) / scale;
    EXPECT_GE(ratio, 0.1) << n;
    EXPECT_LE(ratio, 10.0) << n;
  }
}

TEST(ExpVariance, TrivialCases) {
  for (std::int64_t q : {2, 5, 12}) EXPECT_EQ(exp_variance_exact(Sequence::constant(q, 1.0), q), Rational(0));
  EXPECT_EQ(exp_variance_exact(random_seq(80, 5, -4, 4), 1), Rational(0));
}

TEST(ExpVariance, MatchesComplexOracle) {
  const auto d2 = sieve_all(50, 2).divisor_sequence(2);
  EXPECT_NEAR(exp_variance_float(d2, 6), h_oracle(d2, 6), 1e-9);
  const auto r = random_seq(300, 9, -5, 5);
  for (std::int64_t q = 1; q <= 30; ++q) {
    const double o = h_oracle(r, q);
    ASSERT_NEAR(exp_variance_float(r, q), o, 1e-8 * (1.0 + std::abs(o))) << q;
    ASSERT_NEAR(exp_variance_exact(r, q).to_double(), o, 1e-8 * (1.0 + std::abs(o))) << q;
  }
}

TEST(ExpVariance, ReducedEnergyMatchesOpenSum) {
  const auto r = random_seq(256, 13, 0, 3);
  for (std::int64_t q : {1, 3, 8, 15, 49}) {
    double open = 0.0;
    for (std::int64_t a = 1; a <= q; ++a)
      if (std::gcd(a, q) == 1) open += std::norm(exp_sum(r, a, q));
    EXPECT_NEAR(reduced_energy(r, q), open, 1e-8 * (1.0 + open)) << q;
  }
}

TEST(IdentityProp1, ExactOnSmallSequences) {
  const auto t = sieve_all(200, 3);
  std::vector<Sequence> seqs = {t.divisor_sequence(2), t.divisor_sequence(3), random_seq(200, 1, 0, 1),
                                random_seq(128, 2, -1, 1), Sequence::zeros(60)};
  for (const auto& s : seqs) {
    for (std::int64_t q = 1; q <= 50; ++q) {
      const auto c = check_identity_prop1(s, q);
      ASSERT_TRUE(c.ok && c.exact) << s.name() << " q=" << q;
      ASSERT_EQ(c.residual, 0.0);
      ASSERT_TRUE(c.bad_divisors.empty());
    }
  }
  std::vector<std::int64_t> pm(128);
  std::mt19937_64 rng(42);
  for (auto& x : pm) x = (rng() & 1) ? 1 : -1;
  const auto c = check_identity_prop1(Sequence::from_integers("pm1", pm), 36);
  EXPECT_TRUE(c.ok && c.exact);
}

TEST(IdentityProp1, FloatPathResidualSmall) {
  const auto lam = sieve_all(20000, 2).lambda_sequence();
  for (std::int64_t q : {12, 30, 101, 210}) {
    const auto c = check_identity_prop1(lam, q);
    EXPECT_TRUE(c.ok) << q;
    EXPECT_FALSE(c.exact);
  }
}

TEST(Cor1, LowerBoundProperties) {
  const auto d2 = sieve_all(100, 2).divisor_sequence(2);
  EXPECT_LE(cor1_lower_bound(d2, 12, 3), 12.0 * variance_float(d2, 12) + 1e-9);
  for (std::int64_t q : {5, 7, 11}) {
    EXPECT_NEAR(cor1_lower_bound(d2, q, 1), exp_variance_float(d2, q), 1e-8);
  }
  EXPECT_LE(cor1_lower_bound(d2, 12, 12), 0.0);
  EXPECT_EQ(cor1_lower_bound(d2, 12, 20), 0.0);
}

TEST(Cor1, BoundsQVForRandomSequences) {
  const auto r = random_seq(400, 17, -2, 6);
  for (std::int64_t q = 2; q <= 40; ++q)
    for (std::int64_t q0 : {1, 2, 5, 10})
      ASSERT_LE(cor1_lower_bound(r, q, q0), static_cast<double>(q) * variance_float(r, q) * (1 + 1e-12) + 1e-8);
}

TEST(PsiCounts, SmallExample) {
  const auto t = sieve_all(10, 2);
  const auto p = psi_counts(t, 3);
  ASSERT_EQ(p.residues, (std::vector<std::int64_t>{1, 2}));
  // Lambda(4) = Lambda(8) = log 2
  EXPECT_NEAR(p.psi[0], std::log(2.0) + std::log(7.0), 1e-12);
  EXPECT_NEAR(p.psi[1], 2 * std::log(2.0) + std::log(5.0), 1e-12);
  const auto one = psi_counts(t, 1);
  EXPECT_EQ(one.psi.size(), 1u);
  EXPECT_EQ(one.restricted_variance, 0.0);
}

TEST(PsiCounts, RestrictedCloseToFullForPrimeModulus) {
  const auto t = sieve_all(100000, 2);
  const auto p = psi_counts(t, 101);
  const double full = variance_float(t.lambda_sequence(), 101);
  const double logn = std::log(1e5);
  EXPECT_LE(std::abs(full - p.restricted_variance), 4.0 * logn * logn);
}

TEST(ModulusProfile, AgreesWithPerModulus) {
  const auto t = sieve_all(5000, 2);
  const auto lam = t.lambda_sequence();
  const auto prof = modulus_profile(lam, 120, true);
  for (std::int64_t q = 1; q <= 120; ++q) {
    const auto i = static_cast<std::size_t>(q - 1);
    ASSERT_NEAR(prof.variance[i], variance_float(lam, q), 1e-7 * (1.0 + prof.variance[i])) << q;
    ASSERT_NEAR(prof.diagonal[i], diagonal_sum(lam, q), 1e-7 * prof.diagonal[i]) << q;
    ASSERT_NEAR(prof.restricted_variance[i], psi_counts(t, q).restricted_variance,
                1e-7 * (1.0 + prof.restricted_variance[i])) << q;
  }
}
