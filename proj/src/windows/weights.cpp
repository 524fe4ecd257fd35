#include <cmath>
#include <iomanip>

#include "apvar/windows.hpp"

namespace apvar {

const char* to_string(WeightKind k) { return k == WeightKind::kPrimeSieve ? "prime" : "divisor"; }

WeightSet build_weights(WeightKind kind, double R, int k) {
  require(R >= 2.0, "build_weights: R must be >= 2");
  if (kind == WeightKind::kDivisor) require(k >= 2, "build_weights: k must be >= 2 for divisor weights");
  WeightSet w;
  w.kind = kind;
  w.R = R;
  w.k = k;
  const auto r_max = static_cast<std::int64_t>(std::floor(R));
  w.b.resize(static_cast<std::size_t>(r_max));
  if (kind == WeightKind::kPrimeSieve) {
    const auto table = sieve_all(r_max, 2);
    for (std::int64_t r = 1; r <= r_max; ++r) {
      const int mu = table.moebius(r);
      w.b[static_cast<std::size_t>(r - 1)] = mu == 0 ? 0.0 : mu * std::log(R / static_cast<double>(r));
    }
  } else if (k == 2) {
    std::fill(w.b.begin(), w.b.end(), 1.0);
  } else {
    const auto table = sieve_all(r_max, k - 1);
    for (std::int64_t r = 1; r <= r_max; ++r) {
      w.b[static_cast<std::size_t>(r - 1)] = static_cast<double>(table.divisor_k(k - 1, r));
    }
  }
  for (double v : w.b) w.B = std::max(w.B, std::abs(v));
  return w;
}

void WeightSet::write_csv(std::ostream& os) const {
  os << "r,b_r\n";
  os << std::setprecision(12);
  for (std::int64_t r = 1; r <= r_max(); ++r) os << r << ',' << b[static_cast<std::size_t>(r - 1)] << '\n';
}

Sequence build_tilde_sequence(std::int64_t n, const WeightSet& w, const SmoothWindow& phi) {
  require(n >= 1, "build_tilde_sequence: N must be >= 1");
  require(w.R <= static_cast<double>(n), "build_tilde_sequence: R must not exceed N");
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t r = 1; r <= w.r_max(); ++r) {
    const double br = w.b[static_cast<std::size_t>(r - 1)];
    if (br == 0.0) continue;
    for (std::int64_t m = r; m <= n; m += r) acc[static_cast<std::size_t>(m - 1)] += br;
  }
  const double nd = static_cast<double>(n);
  for (std::int64_t m = 1; m <= n; ++m) acc[static_cast<std::size_t>(m - 1)] *= phi(static_cast<double>(m) / nd);
  return Sequence("tilde", std::move(acc), false);
}

double weight_sum_q(const WeightSet& w, std::int64_t q) {
  require(q >= 1, "weight_sum_q: q must be >= 1");
  if (q > w.r_max()) return 0.0;
  double s = 0.0;
  for (std::int64_t r = q; r <= w.r_max(); r += q) s += w.b[static_cast<std::size_t>(r - 1)] / static_cast<double>(r);
  return s;
}

std::vector<double> weight_sums(const WeightSet& w) {
  std::vector<double> out(static_cast<std::size_t>(w.r_max()), 0.0);
  parallel_for(1, w.r_max() + 1, [&](std::int64_t q) { out[static_cast<std::size_t>(q - 1)] = weight_sum_q(w, q); });
  return out;
}

std::vector<double> window_multiplier(std::int64_t n, const SmoothWindow& phi) {
  std::vector<double> m(static_cast<std::size_t>(n));
  const double nd = static_cast<double>(n);
  for (std::int64_t i = 1; i <= n; ++i) m[static_cast<std::size_t>(i - 1)] = phi(static_cast<double>(i) / nd);
  return m;
}

}  // namespace apvar
