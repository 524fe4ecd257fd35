#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "apvar/circle.hpp"

using namespace apvar;

namespace {

std::complex<double> naive_exp_sum(const Sequence& seq, double alpha) {
  std::complex<double> z = 0.0;
  for (std::int64_t n = 1; n <= seq.size(); ++n) {
    const long double ph = std::fmod(static_cast<long double>(n) * alpha, 1.0L);
    z += seq[n] * std::polar(1.0, static_cast<double>(2.0L * std::numbers::pi_v<long double> * ph));
  }
  return z;
}

bool major_scan(double alpha, double K, double Q0, double Q) {
  const auto qmax = static_cast<std::int64_t>(std::floor(K * Q0 + 1e-9));
  for (std::int64_t q = 1; q <= qmax; ++q)
    for (std::int64_t a = 0; a <= q; ++a)
      if (std::gcd(a, q) == 1 && std::abs(alpha - static_cast<double>(a) / static_cast<double>(q)) <= K / (static_cast<double>(q) * Q))
        return true;
  return false;
}

}  // namespace

TEST(ExpSum, Examples) {
  const auto t = sieve_all(1000, 2);
  const auto lam = t.lambda_sequence();
  EXPECT_NEAR(std::abs(eval_exp_sum(lam, 0.0) - lam.sum()), 0.0, 1e-9);
  for (std::int64_t n : {7, 8, 101, 1000}) {
    const auto z = eval_exp_sum(Sequence::constant(n, 1.0), 0.5);
    EXPECT_NEAR(z.real(), n % 2 ? -1.0 : 0.0, 1e-9) << n;
    EXPECT_NEAR(z.imag(), 0.0, 1e-9);
  }
  // class sums weighted by cube roots of unity
  std::complex<double> cls = 0.0;
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (std::int64_t n = 1; n <= 1000; ++n)
      if (n % 3 == a) s += lam[n];
    cls += s * std::polar(1.0, 2.0 * std::numbers::pi * a / 3.0);
  }
  EXPECT_NEAR(std::abs(eval_exp_sum(lam, 1.0 / 3.0) - cls), 0.0, 1e-9);
}

TEST(ExpSum, MatchesNaive) {
  const auto d3 = sieve_all(5000, 3).divisor_sequence(3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng);
    const auto ref = naive_exp_sum(d3, a);
    EXPECT_NEAR(std::abs(eval_exp_sum(d3, a) - ref), 0.0, 1e-9 * d3.sum_abs()) << a;
  }
}

TEST(Spectrum, SmallExampleAndGridValues) {
  const auto s = build_spectrum(Sequence::constant(4, 1.0), 8);
  EXPECT_NEAR(s.power[0], 16.0, 1e-12);
  const auto d2 = sieve_all(3000, 2).divisor_sequence(2);
  const auto sp = build_spectrum(d2, 8192);
  for (std::int64_t t : {0, 1, 17, 4096, 8191}) {
    const auto ref = naive_exp_sum(d2, static_cast<double>(t) / 8192.0);
    EXPECT_NEAR(std::abs(sp.values[static_cast<std::size_t>(t)] - ref), 0.0, 1e-8 * d2.sum_abs()) << t;
  }
  EXPECT_THROW(build_spectrum(d2, 3000), PreconditionError);
  EXPECT_THROW(build_spectrum(d2, 4096), PreconditionError);
}

TEST(Spectrum, ParsevalTenSequences) {
  const std::int64_t n = 10000;
  const auto t = sieve_all(n, 4);
  std::vector<Sequence> seqs = {t.lambda_sequence(), t.divisor_sequence(2), t.divisor_sequence(3), t.divisor_sequence(4),
                                Sequence::constant(n, 1.0)};
  std::mt19937_64 rng(99);
  for (int i = 0; i < 5; ++i) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = static_cast<std::int64_t>(rng() % 7) - 3;
    seqs.push_back(Sequence::from_integers("rand" + std::to_string(i), v));
  }
  for (const auto& s : seqs) {
    const auto sp = build_spectrum(s, 1 << 18);
    EXPECT_NEAR(sp.total_mass / s.sum_squares(), 1.0, 1e-6) << s.name();
  }
}

TEST(Spectrum, CellBoundsDominateFineSamples) {
  const auto lam = sieve_all(2000, 2).lambda_sequence();
  const std::int64_t T = 4096;
  const auto sp = build_spectrum(lam, T);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto t = static_cast<std::int64_t>(rng() % T);
    for (double d : {-0.5, -0.23, 0.11, 0.5}) {
      const double a = (static_cast<double>(t) + d) / static_cast<double>(T);
      const double v = std::abs(naive_exp_sum(lam, a - std::floor(a)));
      ASSERT_LE(v, sp.sup0[static_cast<std::size_t>(t)] * (1 + 1e-9) + 1e-9) << t << ' ' << d;
    }
  }
}

TEST(Spectrum, BinaryExport) {
  const auto sp = build_spectrum(Sequence::constant(10, 1.0), 32);
  const auto path = (std::filesystem::temp_directory_path() / "apvar_spec_test.bin").string();
  sp.export_binary(path);
  std::ifstream is(path, std::ios::binary);
  std::int64_t T = 0;
  is.read(reinterpret_cast<char*>(&T), 8);
  ASSERT_EQ(T, 32);
  std::vector<double> p(32);
  is.read(reinterpret_cast<char*>(p.data()), 32 * 8);
  ASSERT_TRUE(is.good());
  for (int i = 0; i < 32; ++i) EXPECT_EQ(p[static_cast<std::size_t>(i)], sp.power[static_cast<std::size_t>(i)]);
  std::filesystem::remove(path);
}

TEST(Arcs, IsMajorExamples) {
  const ArcSystem arcs{5.0, 2.0, 200.0, 1000};
  const auto w0 = is_major(0.0, arcs);
  EXPECT_TRUE(w0.major);
  EXPECT_EQ(w0.a, 0);
  EXPECT_EQ(w0.q, 1);
  const auto w = is_major(0.5, arcs);
  EXPECT_TRUE(w.major);
  EXPECT_EQ(w.a, 1);
  EXPECT_EQ(w.q, 2);
  // 1/q0 with q0 prime in (K Q0, Q / K]
  const ArcSystem small{5.0, 1.0, 400.0, 1000};
  for (std::int64_t q0 : {11, 13, 17, 19, 23, 29, 31, 37}) {
    const double a = 1.0 / static_cast<double>(q0);
    EXPECT_EQ(is_major(a, small).major, major_scan(a, 5.0, 1.0, 400.0)) << q0;
  }
}

TEST(Arcs, IsMajorMatchesExhaustiveScan) {
  const ArcSystem arcs{5.0, 3.0, 500.0, 2000};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 3000; ++i) {
    const double a = u(rng);
    const auto w = is_major(a, arcs);
    ASSERT_EQ(w.major, major_scan(a, 5.0, 3.0, 500.0)) << a;
    if (w.major) {
      ASSERT_EQ(std::gcd(w.a, w.q), 1);
      const double d = std::abs(a - static_cast<double>(w.a) / static_cast<double>(w.q));
      ASSERT_LE(std::min(d, 1.0 - d), 5.0 / (static_cast<double>(w.q) * 500.0));
    }
  }
}

TEST(Arcs, FareyDensityLowerBound) {
  const ArcSystem arcs{5.0, 2.0, 200.0, 1000};
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  EXPECT_GE(farey_density_f(golden, arcs), farey_density_lower_bound(arcs));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ArcSystem wide{8.0, 3.0, 2000.0, 10000};
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng);
    if (is_major(a, wide).major) continue;
    ASSERT_GE(farey_density_f(a, wide), farey_density_lower_bound(wide)) << a;
  }
}

TEST(Arcs, FareyDensityFullCover) {
  // K / (Q0 Q) >= 1/2: every admissible fraction counts
  const ArcSystem arcs{5.0, 1.0, 8.0, 100};
  double expect = 0.0;
  for (std::int64_t q = 2; q <= 8; ++q) {
    std::int64_t c = 0;
    for (std::int64_t a = 0; a < q; ++a) c += q / std::gcd(a, q) > 1;
    expect += static_cast<double>(c) / static_cast<double>(q);
  }
  EXPECT_NEAR(farey_density_f(0.3, arcs), expect, 1e-12);
}

TEST(Arcs, GridStatesAgreeWithPointwise) {
  const ArcSystem arcs{6.0, 4.0, 800.0, 4000};
  const std::int64_t T = 1 << 15;
  const auto g = classify_arcs(arcs, T);
  ASSERT_EQ(static_cast<std::int64_t>(g.state.size()), T);
  std::int64_t partial = 0;
  for (std::int64_t t = 0; t < T; ++t) {
    const double c = static_cast<double>(t) / static_cast<double>(T);
    const auto s = g.state[static_cast<std::size_t>(t)];
    if (s == ArcGrid::kMajor) {
      ASSERT_TRUE(is_major(c, arcs).major) << t;
    }
    if (s == ArcGrid::kMinor) {
      ASSERT_FALSE(is_major(c, arcs).major) << t;
      ASSERT_FALSE(is_major(c + 0.49 / static_cast<double>(T), arcs).major) << t;
    }
    partial += s == ArcGrid::kPartial;
  }
  EXPECT_EQ(partial, static_cast<std::int64_t>(g.partial.size()));
  for (const auto& p : g.partial) {
    ASSERT_GT(p.weight, 0.0);
    ASSERT_LT(p.weight, 1.0);
  }
  // measure against a fine sampling of the circle
  const std::int64_t M = 1 << 20;
  std::int64_t minor = 0;
  for (std::int64_t i = 0; i < M; ++i) minor += !is_major((static_cast<double>(i) + 0.5) / static_cast<double>(M), arcs).major;
  const double sampled = static_cast<double>(minor) / static_cast<double>(M);
  EXPECT_NEAR(g.minor_measure, sampled, 2.0 * static_cast<double>(g.interval_count) / static_cast<double>(M));
}

TEST(Arcs, RunLengthJson) {
  const ArcSystem arcs{5.0, 2.0, 300.0, 1000};
  const auto g = classify_arcs(arcs, 1 << 12);
  const auto j = g.to_rle_json();
  EXPECT_EQ(j.at("T").get<std::int64_t>(), 1 << 12);
  std::int64_t total = 0;
  std::size_t t = 0;
  const char* names = "Mmp";
  for (const auto& run : j.at("runs")) {
    const auto st = run.at(0).get<std::string>();
    const auto len = run.at(1).get<std::int64_t>();
    ASSERT_GT(len, 0);
    for (std::int64_t i = 0; i < len; ++i, ++t) ASSERT_EQ(st[0], names[g.state[t]]);
    total += len;
  }
  EXPECT_EQ(total, 1 << 12);
}

TEST(MinorArc, EverythingMajorGivesZero) {
  const auto seq = sieve_all(64, 2).divisor_sequence(2);
  const std::int64_t T = 128;
  const ArcSystem arcs{70.0, 2.0, 64.0, 64};
  const auto r = minor_arc_integral(build_spectrum(seq, T), classify_arcs(arcs, T));
  EXPECT_EQ(r.value, 0.0);
}

TEST(MinorArc, PartitionAndRefinement) {
  const std::int64_t n = 10000;
  const auto lam = sieve_all(n, 2).lambda_sequence();
  const double Q = std::pow(static_cast<double>(n), 0.75);
  const ArcSystem arcs{2.0, 3.0, Q, n};
  const std::int64_t T = default_grid_size(n);
  const auto coarse = minor_arc_integral(build_spectrum(lam, T), arcs);
  const auto fine = minor_arc_integral(build_spectrum(lam, 4 * T), arcs);
  EXPECT_LE(std::abs(coarse.value - fine.value), coarse.error_bound + fine.error_bound);
  EXPECT_LE(std::abs(coarse.value - coarse.complement_value), coarse.error_bound);
  EXPECT_LT(coarse.error_bound, 0.5 * coarse.value);
}

TEST(MinorArc, CrossAndAbsIntegralsAgreeOnDiagonal) {
  const std::int64_t n = 3000;
  const auto d2 = sieve_all(n, 2).divisor_sequence(2);
  const ArcSystem arcs{5.0, 3.0, 600.0, n};
  const std::int64_t T = default_grid_size(n);
  const auto sp = build_spectrum(d2, T);
  const auto g = classify_arcs(arcs, T);
  const auto m = minor_arc_integral(sp, g);
  const auto c = minor_cross_integral(sp, sp, g);
  const auto a = minor_abs_product_integral(sp, sp, g);
  EXPECT_NEAR(c.value.real(), m.value, 1e-9 * m.value);
  EXPECT_NEAR(c.value.imag(), 0.0, 1e-9 * m.value);
  EXPECT_NEAR(a.value, m.value, a.error_bound + m.error_bound);
}
