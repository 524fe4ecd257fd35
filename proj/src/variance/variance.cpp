#include "apvar/variance.hpp"

#include <cmath>
#include <numeric>

#include "apvar/simd/kernels.hpp"

namespace apvar {

namespace {

// gcd(i, q) for i in [0, q): assign each divisor to its multiples in
// ascending order so the largest dividing divisor wins.
std::vector<std::int64_t> gcd_table(std::int64_t q, const std::vector<std::int64_t>& divs) {
  std::vector<std::int64_t> g(static_cast<std::size_t>(q), 1);
  for (std::int64_t h : divs) {
    for (std::int64_t m = 0; m < q; m += h) g[static_cast<std::size_t>(m)] = h;
  }
  return g;
}

struct SparseView {
  std::vector<std::uint32_t> index;  // n
  std::vector<double> value;
};

SparseView sparse_support(const Sequence& seq) {
  SparseView sv;
  for (std::int64_t n = 1; n <= seq.size(); ++n) {
    if (seq[n] != 0.0) {
      sv.index.push_back(static_cast<std::uint32_t>(n));
      sv.value.push_back(seq[n]);
    }
  }
  return sv;
}

// Lemire's fast 32-bit modulus.
struct FastMod {
  std::uint64_t m;
  std::uint32_t d;
  explicit FastMod(std::uint32_t divisor) : m(~std::uint64_t{0} / divisor + 1), d(divisor) {}
  std::uint32_t operator()(std::uint32_t n) const {
    const std::uint64_t low = m * n;
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * d) >> 64);
  }
};

void dense_class_sums(std::span<const double> values, std::int64_t q, std::vector<double>& sums) {
  sums.assign(static_cast<std::size_t>(q), 0.0);
  std::int64_t r = 1 % q;
  for (double v : values) {
    sums[static_cast<std::size_t>(r)] += v;
    if (++r == q) r = 0;
  }
}

void sparse_class_sums(const SparseView& sv, std::int64_t q, std::vector<double>& sums) {
  sums.assign(static_cast<std::size_t>(q), 0.0);
  const FastMod mod(static_cast<std::uint32_t>(q));
  for (std::size_t i = 0; i < sv.index.size(); ++i) sums[mod(sv.index[i])] += sv.value[i];
}

std::vector<mpz_class> exact_class_sums(const Sequence& seq, std::int64_t q) {
  std::vector<mpz_class> sums(static_cast<std::size_t>(q), 0);
  for (std::int64_t n = 1; n <= seq.size(); ++n) {
    sums[static_cast<std::size_t>(n % q)] += static_cast<long>(seq.integer(n));
  }
  return sums;
}

struct FloatStats {
  double variance = 0.0;
  double diagonal = 0.0;
  double restricted = 0.0;
};

FloatStats stats_from_class_sums(const std::vector<double>& sums, std::int64_t q, bool full,
                                 std::vector<std::pair<std::int64_t, double>>* per_class) {
  FloatStats st;
  st.diagonal = simd::dot(sums, sums);
  const auto divs = divisors(q);
  if (!full) {
    double g1 = 0.0;
    std::int64_t count = 0;
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) == 1) {
        g1 += sums[static_cast<std::size_t>(a)];
        ++count;
      }
    }
    const double mean = g1 / static_cast<double>(count);
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) == 1) {
        const double dev = sums[static_cast<std::size_t>(a)] - mean;
        st.restricted += dev * dev;
      }
    }
    return st;
  }
  const auto g = gcd_table(q, divs);
  std::vector<double> class_total(static_cast<std::size_t>(q + 1), 0.0);
  for (std::int64_t a = 0; a < q; ++a) class_total[static_cast<std::size_t>(g[static_cast<std::size_t>(a)])] += sums[static_cast<std::size_t>(a)];
  std::vector<double> term(static_cast<std::size_t>(q + 1), 0.0);
  for (std::int64_t a = 0; a < q; ++a) {
    const std::int64_t h = g[static_cast<std::size_t>(a)];
    const double mean = class_total[static_cast<std::size_t>(h)] / static_cast<double>(euler_phi(q / h));
    const double dev = sums[static_cast<std::size_t>(a)] - mean;
    term[static_cast<std::size_t>(h)] += dev * dev;
  }
  for (std::int64_t h : divs) {
    st.variance += term[static_cast<std::size_t>(h)];
    if (per_class) per_class->emplace_back(h, term[static_cast<std::size_t>(h)]);
  }
  st.restricted = term[1];
  return st;
}

}  // namespace

const char* to_string(VarianceMethod m) {
  return m == VarianceMethod::kDirect ? "direct" : "bilinear";
}

nlohmann::json VarianceReport::to_json() const {
  nlohmann::json j{{"q", q}, {"V", value}, {"method", to_string(method)}};
  if (exact) j["V_exact"] = exact->str();
  return j;
}

Rational variance_exact(const Sequence& seq, std::int64_t q, VarianceMethod method) {
  require(q >= 1, "variance: q must be >= 1");
  require(!seq.empty(), "variance: empty sequence");
  require(seq.is_integer_valued(), "variance_exact: sequence must be integer-valued");
  const auto sums = exact_class_sums(seq, q);
  const auto divs = divisors(q);
  const auto g = gcd_table(q, divs);
  std::vector<mpz_class> class_total(static_cast<std::size_t>(q + 1), 0);
  for (std::int64_t a = 0; a < q; ++a) class_total[static_cast<std::size_t>(g[static_cast<std::size_t>(a)])] += sums[static_cast<std::size_t>(a)];

  mpq_class v = 0;
  if (method == VarianceMethod::kDirect) {
    for (std::int64_t a = 0; a < q; ++a) {
      const std::int64_t h = g[static_cast<std::size_t>(a)];
      mpq_class dev(sums[static_cast<std::size_t>(a)]);
      dev -= mpq_class(class_total[static_cast<std::size_t>(h)], static_cast<long>(euler_phi(q / h)));
      v += dev * dev;
    }
  } else {
    mpz_class diag = 0;
    for (const auto& s : sums) diag += s * s;
    v = diag;
    for (std::int64_t h : divs) {
      const auto& gh = class_total[static_cast<std::size_t>(h)];
      v -= mpq_class(gh * gh, static_cast<long>(euler_phi(q / h)));
    }
  }
  return Rational(v);
}

double variance_float(const Sequence& seq, std::int64_t q, VarianceMethod method) {
  require(q >= 1, "variance: q must be >= 1");
  require(!seq.empty(), "variance: empty sequence");
  std::vector<double> sums;
  dense_class_sums(seq.values(), q, sums);
  if (method == VarianceMethod::kDirect) return stats_from_class_sums(sums, q, true, nullptr).variance;
  const auto divs = divisors(q);
  const auto g = gcd_table(q, divs);
  std::vector<double> class_total(static_cast<std::size_t>(q + 1), 0.0);
  for (std::int64_t a = 0; a < q; ++a) class_total[static_cast<std::size_t>(g[static_cast<std::size_t>(a)])] += sums[static_cast<std::size_t>(a)];
  double v = simd::dot(sums, sums);
  for (std::int64_t h : divs) {
    const double gh = class_total[static_cast<std::size_t>(h)];
    v -= gh * gh / static_cast<double>(euler_phi(q / h));
  }
  return v;
}

VarianceReport variance_mod_q(const Sequence& seq, std::int64_t q, VarianceMethod method) {
  require(q >= 1, "variance_mod_q: q must be >= 1");
  require(!seq.empty(), "variance_mod_q: empty sequence");
  VarianceReport r;
  r.q = q;
  r.method = method;
  if (seq.is_integer_valued() && seq.size() <= kExactPathMaxN) {
    r.exact = variance_exact(seq, q, method);
    r.value = r.exact->to_double();
  } else if (method == VarianceMethod::kDirect) {
    std::vector<double> sums;
    dense_class_sums(seq.values(), q, sums);
    r.value = stats_from_class_sums(sums, q, true, &r.per_class_terms).variance;
  } else {
    r.value = variance_float(seq, q, method);
  }
  if (method == VarianceMethod::kDirect && r.per_class_terms.empty()) {
    std::vector<double> sums;
    dense_class_sums(seq.values(), q, sums);
    stats_from_class_sums(sums, q, true, &r.per_class_terms);
  }
  return r;
}

double variance_total(const Sequence& seq, std::int64_t q_max) {
  require(q_max >= 1, "variance_total: Q must be >= 1");
  const auto profile = modulus_profile(seq, q_max, true);
  double total = 0.0;
  for (double v : profile.variance) total += v;
  return total;
}

ModulusProfile modulus_profile(const Sequence& seq, std::int64_t q_max, bool with_full_variance) {
  require(q_max >= 1, "modulus_profile: Q must be >= 1");
  require(seq.size() < (std::int64_t{1} << 32), "modulus_profile: N too large");
  ModulusProfile out;
  const auto qs = static_cast<std::size_t>(q_max);
  out.variance.assign(qs, 0.0);
  out.diagonal.assign(qs, 0.0);
  out.restricted_variance.assign(qs, 0.0);

  std::int64_t nnz = 0;
  for (double v : seq.values()) nnz += (v != 0.0);
  const bool sparse = nnz * 4 < seq.size();
  SparseView sv;
  if (sparse) sv = sparse_support(seq);

  parallel_for(1, q_max + 1, [&](std::int64_t q) {
    std::vector<double> sums;
    if (sparse) {
      sparse_class_sums(sv, q, sums);
    } else {
      dense_class_sums(seq.values(), q, sums);
    }
    const auto st = stats_from_class_sums(sums, q, with_full_variance, nullptr);
    const auto i = static_cast<std::size_t>(q - 1);
    out.variance[i] = st.variance;
    out.diagonal[i] = st.diagonal;
    out.restricted_variance[i] = st.restricted;
  });
  return out;
}

Rational diagonal_sum_exact(const Sequence& seq, std::int64_t q) {
  require(seq.is_integer_valued(), "diagonal_sum_exact: sequence must be integer-valued");
  mpz_class diag = 0;
  for (const auto& s : exact_class_sums(seq, q)) diag += s * s;
  return Rational(mpq_class(diag));
}

double diagonal_sum(const Sequence& seq, std::int64_t q) {
  std::vector<double> sums;
  dense_class_sums(seq.values(), q, sums);
  return simd::dot(sums, sums);
}

Rational exp_variance_exact(const Sequence& seq, std::int64_t q) {
  require(q >= 1, "exp_variance_H: q must be >= 1");
  Rational bilinear(0);
  for (std::int64_t e : divisors(q)) {
    const int mu = moebius(q / e);
    if (mu == 0) continue;
    bilinear += Rational(mu * e) * diagonal_sum_exact(seq, e);
  }
  const Rational corr = ramanujan_correlation_exact(seq, q);
  return bilinear - corr * corr / Rational(euler_phi(q));
}

double reduced_energy(const Sequence& seq, std::int64_t q) {
  require(q >= 1, "reduced_energy: q must be >= 1");
  double bilinear = 0.0;
  for (std::int64_t e : divisors(q)) {
    const int mu = moebius(q / e);
    if (mu == 0) continue;
    bilinear += static_cast<double>(mu * e) * diagonal_sum(seq, e);
  }
  return bilinear;
}

double exp_variance_float(const Sequence& seq, std::int64_t q) {
  const double corr = ramanujan_correlation(seq, q);
  return reduced_energy(seq, q) - corr * corr / static_cast<double>(euler_phi(q));
}

ExpVarianceReport exp_variance_H(const Sequence& seq, std::int64_t q) {
  require(q >= 1, "exp_variance_H: q must be >= 1");
  ExpVarianceReport r;
  r.q = q;
  if (seq.is_integer_valued() && seq.size() <= kExactPathMaxN) {
    r.exact = exp_variance_exact(seq, q);
    r.value = r.exact->to_double();
  } else {
    r.value = exp_variance_float(seq, q);
  }
  return r;
}

IdentityCheck check_identity_prop1(const Sequence& seq, std::int64_t q) {
  require(q >= 1, "check_identity_prop1: q must be >= 1");
  IdentityCheck c;
  const auto divs = divisors(q);
  if (seq.is_integer_valued()) {
    c.exact = true;
    std::vector<Rational> v, h;
    for (std::int64_t d : divs) {
      v.push_back(variance_exact(seq, d));
      h.push_back(exp_variance_exact(seq, d));
    }
    Rational rhs(0);
    for (const auto& x : h) rhs += x;
    const Rational lhs = Rational(q) * v.back();
    c.residual = abs(lhs - rhs).to_double();
    c.ok = lhs == rhs;
    if (!c.ok) {
      // H(d) should equal Sum_{e|d} e V(e) mu(d/e).
      for (std::size_t i = 0; i < divs.size(); ++i) {
        Rational inv(0);
        for (std::size_t j = 0; j <= i; ++j) {
          if (divs[i] % divs[j] != 0) continue;
          const int mu = moebius(divs[i] / divs[j]);
          if (mu != 0) inv += Rational(mu * divs[j]) * v[j];
        }
        if (inv != h[i]) c.bad_divisors.push_back(divs[i]);
      }
    }
    return c;
  }
  std::vector<double> v, h;
  for (std::int64_t d : divs) {
    v.push_back(variance_float(seq, d));
    h.push_back(exp_variance_float(seq, d));
  }
  double rhs = 0.0;
  for (double x : h) rhs += x;
  const double lhs = static_cast<double>(q) * v.back();
  c.residual = std::abs(lhs - rhs);
  const double scale = std::max(lhs, 1e-300);
  c.ok = c.residual <= 1e-6 * scale || (lhs == 0.0 && c.residual < 1e-9);
  if (!c.ok) {
    for (std::size_t i = 0; i < divs.size(); ++i) {
      double inv = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        if (divs[i] % divs[j] != 0) continue;
        inv += moebius(divs[i] / divs[j]) * static_cast<double>(divs[j]) * v[j];
      }
      if (std::abs(inv - h[i]) > 1e-6 * std::max(std::abs(h[i]), 1.0)) c.bad_divisors.push_back(divs[i]);
    }
  }
  return c;
}

double cor1_lower_bound(const Sequence& seq, std::int64_t q, std::int64_t q0) {
  require(q >= 1, "cor1_lower_bound: q must be >= 1");
  require(q0 >= 1, "cor1_lower_bound: Q0 must be >= 1");
  // Classes a mod q with reduced denominator r = q/(a,q) > Q0, grouped by r.
  double energy = 0.0;
  double tail = 0.0;
  for (std::int64_t r : divisors(q)) {
    if (r <= q0) continue;
    energy += reduced_energy(seq, r);
    const double corr = ramanujan_correlation(seq, r);
    tail += corr * corr / static_cast<double>(euler_phi(r));
  }
  return energy - tail;
}

PsiCounts psi_counts(const SieveTable& table, std::int64_t q) {
  require(q >= 1, "psi_counts: q must be >= 1");
  require(q <= table.n_max, "psi_counts: q must not exceed N");
  PsiCounts out;
  out.q = q;
  std::vector<double> sums(static_cast<std::size_t>(q), 0.0);
  std::int64_t r = 1 % q;
  for (std::int64_t n = 1; n <= table.n_max; ++n) {
    sums[static_cast<std::size_t>(r)] += table.von_mangoldt(n);
    if (++r == q) r = 0;
  }
  for (std::int64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    out.residues.push_back(q == 1 ? 0 : a);
    out.psi.push_back(sums[static_cast<std::size_t>(a)]);
    out.psi_q += sums[static_cast<std::size_t>(a)];
  }
  const double mean = out.psi_q / static_cast<double>(out.psi.size());
  for (double p : out.psi) out.restricted_variance += (p - mean) * (p - mean);
  return out;
}

}  // namespace apvar
