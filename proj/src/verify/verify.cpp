#include "apvar/verify.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "apvar/dirichlet.hpp"
#include "apvar/pipeline.hpp"
#include "apvar/variance.hpp"
#include "apvar/windows.hpp"

namespace apvar {

const char* to_string(Suite s) {
  switch (s) {
    case Suite::kIdentities: return "identities";
    case Suite::kEuler: return "euler";
    case Suite::kWindows: return "windows";
    case Suite::kAll: return "all";
  }
  return "?";
}

Suite parse_suite(const std::string& name) {
  if (name == "identities") return Suite::kIdentities;
  if (name == "euler") return Suite::kEuler;
  if (name == "windows") return Suite::kWindows;
  if (name == "all") return Suite::kAll;
  throw PreconditionError("unknown suite '" + name + "' (expected identities, euler, windows or all)");
}

bool SuiteResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

Rational ramanujan_orthogonality_lhs(std::int64_t q, std::int64_t m, std::int64_t n) {
  Rational s = 0;
  for (std::int64_t d : divisors(q)) {
    s += Rational(ramanujan_sum(d, m) * ramanujan_sum(d, n), euler_phi(d));
  }
  return s;
}

Rational ramanujan_orthogonality_rhs(std::int64_t q, std::int64_t m, std::int64_t n) {
  const std::int64_t h = std::gcd(m, q);
  if (h != std::gcd(n, q)) return 0;
  return Rational(q, euler_phi(q / h));
}

namespace {

std::vector<Sequence> identity_sequences(std::int64_t n) {
  std::vector<Sequence> out;
  const auto table = sieve_all(n, 3);
  out.push_back(table.divisor_sequence(2));
  out.push_back(table.divisor_sequence(3));
  std::mt19937_64 rng(20240611 + static_cast<std::uint64_t>(n));
  std::vector<std::int64_t> bits(static_cast<std::size_t>(n)), signs(static_cast<std::size_t>(n));
  for (auto& b : bits) b = static_cast<std::int64_t>(rng() & 1U);
  for (auto& s : signs) s = (rng() & 1U) ? 1 : -1;
  out.push_back(Sequence::from_integers("random01", bits));
  out.push_back(Sequence::from_integers("random_pm1", signs));
  std::vector<std::int64_t> spike(static_cast<std::size_t>(n), 0);
  spike[static_cast<std::size_t>(n / 3)] = 1;
  out.push_back(Sequence::from_integers("spike", spike));
  return out;
}

void identities(SuiteResult& r, const VerifyOptions& opt) {
  {
    double worst = 0.0;
    bool integral = true;
    for (std::int64_t q = 1; q <= 60; ++q) {
      for (std::int64_t n = 1; n <= 120; ++n) {
        std::complex<double> s = 0.0;
        for (std::int64_t a = 1; a <= q; ++a) {
          if (std::gcd(a, q) == 1) s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(a * n) / q);
        }
        const auto c = ramanujan_sum(q, n);
        worst = std::max(worst, std::abs(s - static_cast<double>(c)));
        integral = integral && std::abs(s.imag()) < 1e-9;
      }
    }
    r.checks.push_back({"ramanujan sum closed form vs exponential sum (q<=60, n<=120)", worst < 1e-9 && integral,
                        "max deviation " + format_double(worst)});
  }
  {
    // c_d(n) table for d <= 60, n <= 120.
    std::vector<std::vector<std::int64_t>> c(61, std::vector<std::int64_t>(121, 0));
    for (std::int64_t d = 1; d <= 60; ++d)
      for (std::int64_t n = 1; n <= 120; ++n) c[static_cast<std::size_t>(d)][static_cast<std::size_t>(n)] = ramanujan_sum(d, n);
    if (opt.inject_fault) c[6][5] += 1;
    std::int64_t failures = 0;
    std::string first;
    for (std::int64_t q = 1; q <= 60; ++q) {
      const auto divs = divisors(q);
      std::vector<std::int64_t> phis;
      for (auto d : divs) phis.push_back(euler_phi(d));
      for (std::int64_t m = 1; m <= 120; ++m) {
        for (std::int64_t n = 1; n <= 120; ++n) {
          Rational lhs = 0;
          for (std::size_t i = 0; i < divs.size(); ++i) {
            const auto d = static_cast<std::size_t>(divs[i]);
            lhs += Rational(c[d][static_cast<std::size_t>(m)] * c[d][static_cast<std::size_t>(n)], phis[i]);
          }
          if (lhs != ramanujan_orthogonality_rhs(q, m, n)) {
            if (failures++ == 0) first = "q=" + std::to_string(q) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
          }
        }
      }
    }
    r.checks.push_back({"Ramanujan orthogonality, exact (q<=60, m,n<=120)", failures == 0,
                        failures == 0 ? "all equal" : std::to_string(failures) + " mismatches, first at " + first});
  }
  {
    std::int64_t pairs = 0, failures = 0;
    std::string first;
    for (std::int64_t n : {128, 200}) {
      for (const auto& seq : identity_sequences(n)) {
        for (std::int64_t q = 1; q <= 50; ++q) {
          ++pairs;
          const auto chk = check_identity_prop1(seq, q);
          if (!(chk.ok && chk.exact && chk.residual == 0.0)) {
            if (failures++ == 0) first = seq.name() + " N=" + std::to_string(n) + " q=" + std::to_string(q);
          }
        }
      }
    }
    r.checks.push_back({"q V(q) = Sum_{d|q} H(d), exact", failures == 0,
                        std::to_string(pairs) + " pairs" + (failures ? ", first failure " + first : std::string())});
  }
  {
    std::int64_t failures = 0;
    for (const auto& seq : identity_sequences(96)) {
      for (std::int64_t q = 1; q <= 36; ++q) {
        Rational rhs = 0;
        for (auto d : divisors(q)) {
          const int mu = moebius(q / d);
          if (mu != 0) rhs += Rational(d * mu) * variance_exact(seq, d);
        }
        if (rhs != exp_variance_exact(seq, q)) ++failures;
      }
    }
    r.checks.push_back({"H(q) = Sum_{d|q} d V(d) mu(q/d), exact", failures == 0, std::to_string(failures) + " failures"});
  }
}

void lemma5(SuiteResult& r) {
  const std::int64_t n = 2000;
  const auto table = sieve_all(n, 3);
  const auto phi = SmoothWindow::build(0.05);
  double worst = 0.0;
  for (int j : {2, 3}) {
    const auto seq = table.divisor_sequence(j);
    for (auto kind : {WeightKind::kPrimeSieve, WeightKind::kDivisor}) {
      const auto w = build_weights(kind, 44.5, 3);
      worst = std::max(worst, check_lemma5(seq, w, phi).residual);
    }
  }
  const auto lam = table.lambda_sequence();
  worst = std::max(worst, check_lemma5(lam, build_weights(WeightKind::kPrimeSieve, 100.5), phi).residual);
  r.checks.push_back({"Sum a_n a~_n = Sum_q weight_sum_q Sum a_n c_q(n) Phi(n/N) (N=2000)", worst < 1e-9,
                      "max relative residual " + format_double(worst)});
}

void euler(SuiteResult& r) {
  const std::int64_t m_big = 200000;
  const auto table = sieve_all(m_big, 4);
  std::int64_t failures = 0;
  std::string first;
  for (double s : {2.0, 1.5}) {
    std::vector<double> ns(static_cast<std::size_t>(m_big + 1));
    for (std::int64_t n = 1; n <= m_big; ++n) ns[static_cast<std::size_t>(n)] = std::pow(static_cast<double>(n), -s);
    for (int k = 2; k <= 4; ++k) {
      for (std::int64_t q = 1; q <= 20; ++q) {
        std::vector<double> cq(static_cast<std::size_t>(q));
        for (std::int64_t j = 0; j < q; ++j) cq[static_cast<std::size_t>(j)] = static_cast<double>(ramanujan_sum(q, j));
        const cplx target = std::pow(zeta_near_one(s), k) * euler_F_q(q, k, s);
        const cplx target_g = std::pow(zeta_near_one(s), k - 1) * euler_G_q(q, k, s);
        double err_f[2], err_g[2];
        double f = 0.0, g = 0.0;
        int slot = 0;
        for (std::int64_t n = 1; n <= m_big; ++n) {
          const double x = ns[static_cast<std::size_t>(n)];
          f += static_cast<double>(table.divisor_k(k, n)) * cq[static_cast<std::size_t>(n % q)] * x;
          if (n % q == 0) g += static_cast<double>(table.divisor_k(k - 1, n)) * x;
          if (n == m_big / 100 || n == m_big) {
            err_f[slot] = std::abs(f - target.real()) / std::max(std::abs(target), 1e-300);
            err_g[slot] = std::abs(g - target_g.real()) / std::abs(target_g);
            ++slot;
          }
        }
        const bool ok_f = err_f[1] < err_f[0] || err_f[1] < 1e-10;
        const bool ok_g = err_g[1] < err_g[0] || err_g[1] < 1e-10;
        if (!(ok_f && ok_g)) {
          if (failures++ == 0) {
            std::ostringstream os;
            os << "s=" << s << " k=" << k << " q=" << q << " errF " << err_f[0] << "->" << err_f[1] << " errG " << err_g[0]
               << "->" << err_g[1];
            first = os.str();
          }
        }
      }
    }
  }
  r.checks.push_back({"Dirichlet series approach zeta^k F_q and zeta^(k-1) G_q (q<=20, k<=4)", failures == 0,
                      failures ? first : "errors decrease in M"});

  {
    const double n = 1e5;
    double direct = 0.0;
    for (std::int64_t j = 1; j <= static_cast<std::int64_t>(n); ++j) direct += static_cast<double>(table.divisor_k(2, j));
    const auto res = residue_dk_correlation(1, 2, n);
    const double rel = std::abs(res.value - direct) / direct;
    r.checks.push_back({"residue prediction for Sum_{n<=1e5} d_2(n)", rel < 1e-3, "relative error " + format_double(rel)});
  }
  {
    const double x = 1e5;
    double direct = 0.0;
    for (std::int64_t j = 12; j <= static_cast<std::int64_t>(x); j += 12) {
      direct += static_cast<double>(table.divisor_k(2, j)) / static_cast<double>(j);
    }
    const auto res = residue_divisor_mean(12, 3, x);
    const double rel = std::abs(res.value - direct) / direct;
    r.checks.push_back({"residue prediction for Sum_{n<=1e5, 12|n} d_2(n)/n", rel < 5e-2,
                        "relative error " + format_double(rel)});
  }
  {
    const auto sc = singular_constant(2, 100000);
    const double err = std::abs(sc.c_k - 1.0 / (std::numbers::pi * std::numbers::pi));
    r.checks.push_back({"singular constant c_2 -> 1/pi^2", err < 1e-4, "deviation " + format_double(err)});
  }
}

void windows(SuiteResult& r) {
  const double eps = 0.05;
  const auto phi = SmoothWindow::build(eps);
  bool range_ok = true;
  for (int i = 0; i <= 4000; ++i) {
    const double t = -0.25 + 1.5 * i / 4000.0;
    const double v = phi(t);
    range_ok = range_ok && v >= 0.0 && v <= 1.0;
    if (t <= eps / 4 || t >= 1 - eps / 4) range_ok = range_ok && v == 0.0;
    if (t >= eps / 2 && t <= 1 - eps / 2) range_ok = range_ok && v == 1.0;
  }
  r.checks.push_back({"Phi in [0,1], support and plateau", range_ok, ""});
  const double int_err = std::abs(phi.integral() - (1.0 - 0.75 * eps));
  r.checks.push_back({"int Phi = 1 - 3 eps / 4", int_err < 1e-9, "deviation " + std::to_string(int_err)});
  double worst = 0.0;
  for (double xi : {0.0, 0.37, 1.0, 3.5, 10.25, 40.0, 123.4, 700.0}) {
    worst = std::max(worst, std::abs(phi.transform(xi) - phi.transform_direct(xi)));
  }
  r.checks.push_back({"tabulated transform vs direct quadrature", worst < 1e-8, "max deviation " + format_double(worst)});
  lemma5(r);
}

}  // namespace

SuiteResult run_suite(Suite suite, const VerifyOptions& opt) {
  SuiteResult r;
  if (suite == Suite::kIdentities || suite == Suite::kAll) identities(r, opt);
  if (suite == Suite::kEuler || suite == Suite::kAll) euler(r);
  if (suite == Suite::kWindows || suite == Suite::kAll) windows(r);
  return r;
}

}  // namespace apvar
