#include <cmath>

#include "apvar/dirichlet.hpp"

namespace apvar {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Rational factorial_exact(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(mpq_class(f));
}

}  // namespace

double polynomial_69_unchecked(int k, double log_n, double log_r, double log_kq0) {
  require(k >= 1, "polynomial_69: k must be >= 1");
  const int km1 = k - 1;
  const int sq = km1 * km1;
  double total = 0.0;
  for (int l = 0; l <= km1; ++l) {
    const double bl = gen_binomial(-static_cast<std::int64_t>(k) * km1, static_cast<unsigned>(l)).to_double();
    const double ln_part = std::pow(log_n, km1 - l) / factorial(km1 - l);
    for (int j = 0; j <= km1; ++j) {
      const double bj = gen_binomial(-static_cast<std::int64_t>(sq) - l, static_cast<unsigned>(j)).to_double();
      const int e = sq + l + j;
      const double lr_part = std::pow(log_r, km1 - j) / factorial(km1 - j);
      const double diff = (std::pow(log_r, e) - std::pow(log_kq0, e)) / factorial(e);
      total += bl * bj * ln_part * lr_part * diff;
    }
  }
  return total;
}

double polynomial_69(int k, double log_n, double log_r, double log_kq0) {
  require(log_kq0 <= log_r && log_r <= log_n * (1.0 + 1e-12),
          "polynomial_69: need log KQ0 <= log R <= log N");
  return polynomial_69_unchecked(k, log_n, log_r, log_kq0);
}

Rational leading_coefficient_69(int k) {
  require(k >= 2, "leading_coefficient_69: k must be >= 2");
  const std::int64_t m = static_cast<std::int64_t>(k) * (k - 1);
  Rational sum = 0;
  for (int j = 0; j <= k - 1; ++j) {
    sum += gen_binomial(-m, static_cast<unsigned>(j)) /
           (factorial_exact(k - 1 - j) * factorial_exact(static_cast<int>(m) + j));
  }
  return gen_binomial(-m, static_cast<unsigned>(k - 1)) * sum;
}

Rational leading_coefficient_69_closed(int k) {
  require(k >= 2, "leading_coefficient_69_closed: k must be >= 2");
  const int m = k * (k - 1);
  Rational v = Rational(1) / (factorial_exact(k - 1) * factorial_exact(m - 1) * Rational(k * k - 1));
  return (k - 1) % 2 == 0 ? v : -v;
}

ChebyshevChoice choose_R_chebyshev(int k, double n, double q0, double q, double K, double eps, int grid_points) {
  require(k >= 2, "choose_R_chebyshev: k must be >= 2");
  require(n > 1.0 && q0 > 0.0 && q > 0.0 && K > 0.0, "choose_R_chebyshev: bad parameters");
  require(grid_points >= 2, "choose_R_chebyshev: need at least 2 grid points");
  const double logn = std::log(n);
  ChebyshevChoice c;
  c.alpha_lo = (std::log(q0) + eps * logn) / logn;
  c.alpha_hi = (std::log(q) - eps * logn) / logn;
  require(c.alpha_lo < c.alpha_hi, "choose_R_chebyshev: interval [Q0 N^eps, Q N^-eps] is empty");
  const double log_kq0 = std::log(K * q0);
  c.grid_points = grid_points;
  c.grid.resize(static_cast<std::size_t>(grid_points));
  parallel_for(0, grid_points, [&](std::int64_t i) {
    const double a = c.alpha_lo + (c.alpha_hi - c.alpha_lo) * static_cast<double>(i) / (grid_points - 1);
    c.grid[static_cast<std::size_t>(i)] = {a, polynomial_69_unchecked(k, logn, a * logn, log_kq0)};
  });
  for (const auto& [a, v] : c.grid) {
    if (std::abs(v) > std::abs(c.value) || c.R == 0.0) {
      c.value = v;
      c.alpha = a;
      c.R = std::exp(a * logn);
    }
  }
  const int deg = k * k - 1;
  const double lead = std::abs(leading_coefficient_69(k).to_double());
  const double len = c.alpha_hi - c.alpha_lo;
  const double base = std::pow(len / 4.0, deg) * lead * std::pow(logn, deg);
  c.floor = base * std::pow(2.0, -(deg - 1));
  c.sharp_floor = 2.0 * base;
  c.certified = std::abs(c.value) >= c.floor;
  return c;
}

}  // namespace apvar
