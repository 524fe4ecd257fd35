#include <cmath>
#include <numbers>

#include "apvar/dirichlet.hpp"

namespace apvar {

namespace {

constexpr int kCauchyNodes = 128;

// Sum of principal logs of the squarefree local factors p - 1 - p (1 - p^-s)^k.
cplx log_F_squarefree(const Factorization& fac, int k, cplx s) {
  cplx acc = 0.0;
  for (auto [p, a] : fac) {
    const double pd = static_cast<double>(p);
    acc += std::log((pd - 1.0) - pd * std::pow(1.0 - std::exp(-s * std::log(pd)), k));
  }
  return acc;
}

}  // namespace

double f_q_at_one(std::int64_t q, int k) {
  require(k >= 2, "f_q_at_one: k must be >= 2");
  require(is_squarefree(q), "f_q_at_one: q must be squarefree");
  double s = 0.0;
  for (auto [p, a] : factorize(q)) {
    const double pd = static_cast<double>(p);
    const double inner = std::pow(1.0 - 1.0 / pd, -(k - 1)) - 1.0;
    s -= k * std::log(pd) / (pd - 1.0) / inner;
  }
  return s;
}

LogDerivatives f_q_log_derivatives(std::int64_t q, int k, int m) {
  require(k >= 2, "f_q_log_derivatives: k must be >= 2");
  require(m >= 0 && m <= k, "f_q_log_derivatives: need 0 <= m <= k");
  require(is_squarefree(q), "f_q_log_derivatives: q must be squarefree");
  const auto fac = factorize(q);
  LogDerivatives out;
  out.values.assign(static_cast<std::size_t>(m + 1), 0.0);
  out.shape_constants.assign(static_cast<std::size_t>(m + 1), 0.0);
  if (fac.empty()) return out;
  double log_pmax = 0.0;
  for (auto [p, a] : fac) log_pmax = std::max(log_pmax, std::log(static_cast<double>(p)));
  out.radius = std::min(0.05, 0.25 / log_pmax);
  out.values[0] = f_q_at_one(q, k);
  if (m >= 1) {
    std::vector<cplx> samples(kCauchyNodes);
    std::vector<double> theta(kCauchyNodes);
    for (int l = 0; l < kCauchyNodes; ++l) {
      theta[static_cast<std::size_t>(l)] = 2.0 * std::numbers::pi * l / kCauchyNodes;
      const cplx z = out.radius * cplx(std::cos(theta[static_cast<std::size_t>(l)]), std::sin(theta[static_cast<std::size_t>(l)]));
      samples[static_cast<std::size_t>(l)] = log_F_squarefree(fac, k, 1.0 + z);
    }
    double fact = 1.0;
    for (int j = 1; j <= m; ++j) {
      fact *= (j + 1);  // (j+1)!
      cplx acc = 0.0;
      for (int l = 0; l < kCauchyNodes; ++l) {
        const double t = theta[static_cast<std::size_t>(l)];
        acc += samples[static_cast<std::size_t>(l)] * std::exp(cplx(0.0, -(j + 1) * t));
      }
      acc /= static_cast<double>(kCauchyNodes);
      out.values[static_cast<std::size_t>(j)] = fact * acc.real() / std::pow(out.radius, j + 1);
    }
  }
  for (int j = 0; j <= m; ++j) {
    double denom = 0.0;
    for (auto [p, a] : fac) denom += std::pow(std::log(static_cast<double>(p)), j + 1);
    out.shape_constants[static_cast<std::size_t>(j)] = std::abs(out.values[static_cast<std::size_t>(j)]) / denom;
  }
  return out;
}

Fq1Bound check_Fq1_bound(std::int64_t q, int k) {
  require(k >= 2, "check_Fq1_bound: k must be >= 2");
  require(is_squarefree(q), "check_Fq1_bound: q must be squarefree");
  Fq1Bound b;
  Rational lhs = 1;
  Rational dk1 = 1;
  for (auto [p, a] : factorize(q)) {
    const Rational pm1(p - 1);
    lhs *= pm1 - pow(pm1, static_cast<unsigned>(k)) / pow(Rational(p), static_cast<unsigned>(k - 1));
    dk1 *= Rational(k - 1);
  }
  b.lhs = lhs;
  b.rhs = dk1 * pow(Rational(euler_phi(q), q), static_cast<unsigned>(k));
  b.holds = b.lhs >= b.rhs;
  return b;
}

bool ramdkeval_admissible(std::int64_t q, double n, double delta, double smooth_exp) {
  if (q < 1 || !is_squarefree(q)) return false;
  if (static_cast<double>(q) > std::pow(n, 0.5 - delta / 2.0)) return false;
  const double pcap = std::pow(n, smooth_exp);
  for (auto [p, a] : factorize(q)) {
    if (static_cast<double>(p) > pcap) return false;
  }
  return true;
}

RamdkevalResult residue_ramdkeval(std::int64_t q, int k, double n, double delta, double smooth_exp) {
  require(k >= 2, "residue_ramdkeval: k must be >= 2");
  require(n > std::exp(1.0), "residue_ramdkeval: need N > e");
  require(ramdkeval_admissible(q, n, delta, smooth_exp),
          "residue_ramdkeval: q must be squarefree, <= N^(1/2 - delta/2) and N^c-smooth");
  const double logn = std::log(n);
  const double f1 = euler_F_q_squarefree(q, k, 1.0).real();
  auto f = [&](cplx s) {
    return std::pow(zeta_near_one(s), k) * euler_F_q_squarefree(q, k, s) / f1 * std::exp((s - 1.0) * logn) / s;
  };
  const auto res = contour_residue(f, 1.0, 1.0 / logn);
  RamdkevalResult r;
  r.residue = res.value;
  r.error = res.error;
  double fact = 1.0;
  for (int i = 2; i <= k - 1; ++i) fact *= i;
  r.main_term = std::pow(logn + f_q_at_one(q, k), k - 1) / fact;
  r.ratio = r.residue / r.main_term;
  r.scaled = r.residue / std::pow(logn, k - 1);
  return r;
}

}  // namespace apvar
