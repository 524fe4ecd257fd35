#include <array>
#include <cmath>
#include <numbers>

#include <gmpxx.h>

#include "apvar/dirichlet.hpp"

namespace apvar {

namespace {

constexpr int kDirectTerms = 16;
constexpr int kCorrections = 50;

const std::array<double, kCorrections + 1>& bernoulli_table() {
  static const auto table = [] {
    // B_m from Sum_{j=0}^{m} C(m+1, j) B_j = 0, then B_{2j} / (2j)!.
    const int top = 2 * kCorrections;
    std::vector<mpq_class> b(static_cast<std::size_t>(top + 1));
    b[0] = 1;
    for (int m = 1; m <= top; ++m) {
      mpq_class acc = 0;
      mpz_class binom = 1;  // C(m+1, j)
      for (int j = 0; j < m; ++j) {
        acc += binom * b[static_cast<std::size_t>(j)];
        binom = binom * (m + 1 - j) / (j + 1);
      }
      b[static_cast<std::size_t>(m)] = -acc / (m + 1);
    }
    std::array<double, kCorrections + 1> out{};
    mpz_class fact = 1;
    for (int m = 1; m <= top; ++m) {
      fact *= m;
      if (m % 2 == 0) {
        mpq_class r = b[static_cast<std::size_t>(m)] / fact;
        out[static_cast<std::size_t>(m / 2)] = r.get_d();
      }
    }
    return out;
  }();
  return table;
}

}  // namespace

double bernoulli_ratio(int j) {
  require(j >= 1 && j <= kCorrections, "bernoulli_ratio: j out of range");
  return bernoulli_table()[static_cast<std::size_t>(j)];
}

cplx zeta_near_one(cplx s) {
  if (s == cplx(1.0, 0.0)) throw PreconditionError("zeta_near_one: pole at s = 1");
  require(std::abs(s - 1.0) <= 4.0, "zeta_near_one: requires |s - 1| <= 4");
  const auto& br = bernoulli_table();
  cplx sum = 0.0;
  for (int n = 1; n < kDirectTerms; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double m = kDirectTerms;
  const double logm = std::log(m);
  const cplx m_s = std::exp(-s * logm);  // M^-s
  sum += m * m_s / (s - 1.0);
  sum += 0.5 * m_s;
  // Term j: B_2j/(2j)! * s(s+1)...(s+2j-2) * M^(-s-2j+1).
  cplx rising = s;  // s (s+1) ... (s+2j-2)
  cplx power = m_s / m;  // M^(-s-1)
  for (int j = 1; j <= kCorrections; ++j) {
    if (j > 1) {
      rising *= (s + static_cast<double>(2 * j - 3)) * (s + static_cast<double>(2 * j - 2));
      power /= m * m;
    }
    const cplx term = br[static_cast<std::size_t>(j)] * rising * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace apvar
