#include <cmath>
#include <numbers>

#include "apvar/dirichlet.hpp"

namespace apvar {

nlohmann::json ResiduePrediction::to_json() const {
  return {{"value", value}, {"radius", radius}, {"nodes", nodes}, {"error", error}};
}

namespace {

cplx trapezoid_circle(const std::function<cplx(cplx)>& f, cplx centre, double radius, int nodes) {
  cplx acc = 0.0;
  for (int l = 0; l < nodes; ++l) {
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(l) + 0.5) / nodes;
    const cplx z = radius * cplx(std::cos(theta), std::sin(theta));
    acc += f(centre + z) * z;
  }
  return acc / static_cast<double>(nodes);
}

}  // namespace

ResiduePrediction contour_residue(const std::function<cplx(cplx)>& f, cplx centre, double radius, int nodes,
                                  double tolerance) {
  require(radius > 0.0, "contour_residue: radius must be positive");
  require(nodes >= 4, "contour_residue: need at least 4 nodes");
  const cplx v1 = trapezoid_circle(f, centre, radius, nodes);
  const cplx v2 = trapezoid_circle(f, centre, radius, 2 * nodes);
  ResiduePrediction r;
  r.value = v1.real();
  r.radius = radius;
  r.nodes = nodes;
  // Doubling difference, the imaginary residue of a real integrand, and a
  // rounding floor; the factor 2 keeps the doubling change strictly inside.
  r.error = 2.0 * std::abs(v2 - v1) + std::abs(v1.imag()) + 1e-14 * std::abs(v1);
  if (!(r.error <= tolerance * std::max(std::abs(r.value), 1e-300))) {
    throw AccuracyError("contour_residue: error estimate " + std::to_string(r.error) + " exceeds tolerance for value " +
                        std::to_string(r.value));
  }
  return r;
}

ResiduePrediction residue_dk_correlation(std::int64_t q, int k, double n) {
  require(n > std::exp(1.0), "residue_dk_correlation: need N > e");
  const LocalFactorSet lf(q, k);
  const double logn = std::log(n);
  auto f = [&](cplx s) { return std::pow(zeta_near_one(s), k) * lf.F(s) * std::exp(s * logn) / s; };
  return contour_residue(f, 1.0, 1.0 / logn);
}

ResiduePrediction residue_divisor_mean(std::int64_t q, int k, double x) {
  require(k >= 2, "residue_divisor_mean: k must be >= 2");
  require(x > std::exp(1.0), "residue_divisor_mean: need x > e");
  const LocalFactorSet lf(q, k);
  const double logx = std::log(x);
  auto f = [&](cplx s) {
    return std::pow(zeta_near_one(s + 1.0), k - 1) * lf.G(s + 1.0) * std::exp(s * logx) / s;
  };
  return contour_residue(f, 0.0, 1.0 / logx);
}

SingularConstant singular_constant(int k, std::int64_t prime_cap) {
  require(k >= 1, "singular_constant: k must be >= 1");
  require(prime_cap >= 2, "singular_constant: prime cap must be >= 2");
  SingularConstant out;
  out.prime_cap = prime_cap;
  double log_prod = 0.0, comp = 0.0;
  for (std::uint32_t p : primes_up_to(prime_cap)) {
    const double pd = p;
    const double x = 1.0 / pd;
    double sum = 1.0;
    double dk = 1.0;  // d_k(p^a) = C(a + k - 1, k - 1)
    double xa = 1.0;
    for (int a = 1;; ++a) {
      dk = dk * (a + k - 1) / a;
      xa *= x;
      const double term = dk * dk * xa;
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    const double lf = static_cast<double>(k) * k * std::log1p(-x) + std::log(sum);
    const double t = log_prod + lf;
    comp += std::abs(log_prod) >= std::abs(lf) ? (log_prod - t) + lf : (lf - t) + log_prod;
    log_prod = t;
  }
  out.product = std::exp(log_prod + comp);
  double fact = 1.0;
  for (int i = 2; i <= k * k - 1; ++i) fact *= i;
  out.c_k = out.product / fact;
  const double pc = static_cast<double>(prime_cap);
  const double k4 = std::pow(static_cast<double>(k), 4);
  out.tail_estimate = out.product * 1.5 * k4 / (pc * std::log(pc));
  return out;
}

}  // namespace apvar
