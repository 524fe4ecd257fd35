#include <cmath>
#include <limits>

#include "apvar/pipeline.hpp"
#include "apvar/variance.hpp"

namespace apvar {

namespace {

// H_m = Sum_{j<=m} 1/j for m = 0..n.
std::vector<double> harmonic_table(std::int64_t n) {
  std::vector<double> h(static_cast<std::size_t>(n + 1), 0.0);
  for (std::int64_t j = 1; j <= n; ++j) h[static_cast<std::size_t>(j)] = h[static_cast<std::size_t>(j - 1)] + 1.0 / static_cast<double>(j);
  return h;
}

struct Accumulator {
  long double sum = 0.0L;
  void add(double v) { sum += v; }
  double value() const { return static_cast<double>(sum); }
};

}  // namespace

double ramanujan_tail(std::span<const double> corr, std::int64_t q_max, double q0) {
  require(static_cast<std::int64_t>(corr.size()) >= q_max, "ramanujan_tail: too few correlations");
  const auto d_lo = static_cast<std::int64_t>(std::floor(q0)) + 1;
  if (d_lo > q_max) return 0.0;
  const auto table = sieve_all(q_max, 2);
  const auto h = harmonic_table(q_max);
  Accumulator acc;
  for (std::int64_t d = std::max<std::int64_t>(d_lo, 1); d <= q_max; ++d) {
    const double c = corr[static_cast<std::size_t>(d - 1)];
    if (c == 0.0) continue;
    // Sum over q = d m <= Q of 1/q.
    const double inv_q = h[static_cast<std::size_t>(q_max / d)] / static_cast<double>(d);
    acc.add(c * c / static_cast<double>(table.phi[static_cast<std::size_t>(d)]) * inv_q);
  }
  return acc.value();
}

double ramanujan_tail(const Sequence& seq, std::int64_t q_max, double q0) {
  require(q_max >= 1, "ramanujan_tail: Q must be >= 1");
  if (q0 >= static_cast<double>(q_max)) return 0.0;
  const auto corr = ramanujan_correlations(seq, q_max);
  return ramanujan_tail(corr, q_max, q0);
}

nlohmann::json Prop13Report::to_json() const {
  return {{"lhs_variance_sum", lhs_variance_sum},
          {"restricted_sum", restricted_sum},
          {"cor1_sum", cor1_sum},
          {"discrete_sum", discrete_sum},
          {"minor_integral", minor_integral},
          {"minor_error", minor_error},
          {"major_integral", major_integral},
          {"ramanujan_tail", ramanujan_tail},
          {"slack", slack},
          {"large_sieve_term", large_sieve_term},
          {"o_constant_fit", o_constant_fit},
          {"o_constant_allowed", o_constant_allowed},
          {"final_lower_bound", final_lower_bound},
          {"cor1_link", cor1_link},
          {"tail_link", tail_link},
          {"discrete_link", discrete_link},
          {"chain_holds", chain_holds}};
}

Prop13Report assemble_prop13(const Sequence& seq, const ExperimentConfig& cfg, const Spectrum& spec,
                             const ArcGrid& grid) {
  require(spec.N == seq.size(), "assemble_prop13: spectrum built from a different N");
  const auto q_max = static_cast<std::int64_t>(std::floor(cfg.Q));
  require(q_max >= 1 && q_max <= seq.size(), "assemble_prop13: need 1 <= Q <= N");
  const double q0 = cfg.Q0;
  Prop13Report r;

  const auto profile = modulus_profile(seq, q_max, true);
  const auto corr = ramanujan_correlations(seq, q_max);
  const auto table = sieve_all(q_max, 2);
  const auto h = harmonic_table(q_max);

  Accumulator lhs, restricted;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    if (static_cast<double>(q) > q0) lhs.add(profile.variance[static_cast<std::size_t>(q - 1)]);
    restricted.add(profile.restricted_variance[static_cast<std::size_t>(q - 1)]);
  }
  r.lhs_variance_sum = lhs.value();
  r.variance_profile = profile.variance;
  r.restricted_sum = restricted.value();

  // E(r) = Sum_{(b,r)=1} |A(b/r)|^2 = Sum_{e | r} mu(r/e) e P(e).
  std::vector<double> energy(static_cast<std::size_t>(q_max + 1), 0.0);
  for (std::int64_t e = 1; e <= q_max; ++e) {
    const double pe = static_cast<double>(e) * profile.diagonal[static_cast<std::size_t>(e - 1)];
    for (std::int64_t m = 1; e * m <= q_max; ++m) {
      const int mu = table.mu[static_cast<std::size_t>(m)];
      if (mu != 0) energy[static_cast<std::size_t>(e * m)] += mu * pe;
    }
  }
  // H(r) = E(r) - |c(r)|^2 / phi(r).
  std::vector<double> hvar(static_cast<std::size_t>(q_max + 1), 0.0);
  Accumulator discrete;
  for (std::int64_t d = 1; d <= q_max; ++d) {
    const double c = corr[static_cast<std::size_t>(d - 1)];
    hvar[static_cast<std::size_t>(d)] =
        energy[static_cast<std::size_t>(d)] - c * c / static_cast<double>(table.phi[static_cast<std::size_t>(d)]);
    if (static_cast<double>(d) > q0) {
      discrete.add(energy[static_cast<std::size_t>(d)] * h[static_cast<std::size_t>(q_max / d)] / static_cast<double>(d));
    }
  }
  r.discrete_sum = discrete.value();
  r.ramanujan_tail = ramanujan_tail(corr, q_max, q0);

  // Cor1 summed per modulus: (1/q) Sum_{d | q, d > Q0} H(d).
  Accumulator cor1;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    if (static_cast<double>(q) <= q0) continue;
    double s = 0.0;
    for (std::int64_t d : divisors(q)) {
      if (static_cast<double>(d) > q0) s += hvar[static_cast<std::size_t>(d)];
    }
    cor1.add(s / static_cast<double>(q));
  }
  r.cor1_sum = cor1.value();

  const auto minor = minor_arc_integral(spec, grid);
  r.minor_integral = minor.value;
  r.minor_error = minor.error_bound;
  r.major_integral = minor.major_value;
  r.slack = (5.0 + std::log(cfg.K)) / cfg.K;
  r.large_sieve_term = cfg.N * cfg.K / q0 * seq.sum_squares();
  r.o_constant_allowed = kProp13OConstant;

  const double scale = std::max({std::abs(r.lhs_variance_sum), std::abs(r.discrete_sum), 1e-300});
  const double minor_lo = std::max(0.0, r.minor_integral - r.minor_error);
  const double prop_rhs = cfg.Q * (1.0 - r.slack) * minor_lo;
  const double deficit = prop_rhs - r.discrete_sum;
  if (deficit <= 0.0) {
    r.o_constant_fit = 0.0;
  } else {
    r.o_constant_fit = r.large_sieve_term > 0 ? deficit / r.large_sieve_term : std::numeric_limits<double>::infinity();
  }
  r.final_lower_bound = prop_rhs - r.ramanujan_tail - r.o_constant_allowed * r.large_sieve_term;

  r.cor1_link = r.lhs_variance_sum >= r.cor1_sum - 1e-9 * scale;
  r.tail_link = std::abs(r.cor1_sum - (r.discrete_sum - r.ramanujan_tail)) <= 1e-9 * scale;
  r.discrete_link = r.o_constant_fit <= r.o_constant_allowed;
  r.chain_holds = r.cor1_link && r.tail_link && r.discrete_link &&
                  r.lhs_variance_sum >= r.final_lower_bound - 1e-9 * scale;
  return r;
}

Prop13Report assemble_prop13(const Sequence& seq, const ExperimentConfig& cfg) {
  const auto T = cfg.T > 0 ? cfg.T : default_grid_size(seq.size());
  const auto spec = build_spectrum(seq, T);
  const auto grid = classify_arcs(cfg.arcs(), T);
  return assemble_prop13(seq, cfg, spec, grid);
}

nlohmann::json CauchySchwarzReport::to_json() const {
  return {{"cross_abs", cross_abs},
          {"cross_error", cross_error},
          {"complement_cross", complement_cross},
          {"complement_residual", complement_residual},
          {"abs_integral", abs_integral},
          {"abs_error", abs_error},
          {"tilde_minor", tilde_minor},
          {"tilde_error", tilde_error},
          {"tilde_complement", tilde_complement},
          {"minor_a", minor_a},
          {"minor_a_error", minor_a_error},
          {"bound_17", bound_17},
          {"bound_17_error", bound_17_error},
          {"bound_17_certified", bound_17_certified},
          {"bound_113", bound_113},
          {"bound_113_error", bound_113_error},
          {"bound_113_certified", bound_113_certified},
          {"holds", holds}};
}

CauchySchwarzReport cauchy_schwarz_bound(const Sequence& seq, const Sequence& tilde, const ArcGrid& grid,
                                         const Spectrum& spec_a, const Spectrum& spec_tilde) {
  require(spec_a.T == spec_tilde.T && spec_a.T == grid.T, "cauchy_schwarz_bound: spectra and grid must share T");
  require(seq.size() == tilde.size(), "cauchy_schwarz_bound: sequences must have the same length");
  CauchySchwarzReport r;
  const auto cross = minor_cross_integral(spec_a, spec_tilde, grid);
  r.cross_abs = std::abs(cross.value);
  r.cross_error = cross.error_bound;
  double inner = 0.0;
  for (std::int64_t n = 1; n <= seq.size(); ++n) inner += seq[n] * tilde[n];
  r.complement_cross = std::abs(inner - cross.major_value);
  r.complement_residual = std::abs((inner - cross.major_value) - cross.value);

  const auto tm = minor_arc_integral(spec_tilde, grid);
  r.tilde_minor = tm.value;
  r.tilde_error = tm.error_bound;
  r.tilde_complement = tm.complement_value;
  const auto am = minor_arc_integral(spec_a, grid);
  r.minor_a = am.value;
  r.minor_a_error = am.error_bound;
  const auto ab = minor_abs_product_integral(spec_a, spec_tilde, grid);
  r.abs_integral = ab.value;
  r.abs_error = ab.error_bound;

  const double D = r.tilde_minor;
  const double eD = r.tilde_error;
  if (D > 0.0) {
    auto bound = [&](double num, double enum_, double& value, double& err, double& cert) {
      value = num * num / D;
      err = 2.0 * num * enum_ / D + num * num * eD / (D * D) + enum_ * enum_ / D;
      const double lo = std::max(0.0, num - enum_);
      cert = lo * lo / (D + eD);
    };
    bound(r.cross_abs, r.cross_error, r.bound_17, r.bound_17_error, r.bound_17_certified);
    bound(r.abs_integral, r.abs_error, r.bound_113, r.bound_113_error, r.bound_113_certified);
  }
  const double ceiling = r.minor_a + r.minor_a_error;
  const double round = 1e-12 * std::max(1.0, std::abs(r.minor_a));
  r.holds = r.bound_17_certified <= ceiling + round && r.bound_113_certified <= ceiling + round &&
            r.bound_17_certified <= r.bound_113 + r.bound_113_error + round;
  return r;
}

double newprop_rhs(const Sequence& seq, const WeightSet& w, const SmoothWindow& phi, const ArcSystem& arcs,
                   double R) {
  const double nd = static_cast<double>(seq.size());
  require(R <= std::sqrt(nd) * (1 + 1e-12), "newprop_rhs: need R <= sqrt(N)");
  const auto lo = static_cast<std::int64_t>(std::floor(arcs.K * arcs.Q0));
  const auto hi = std::min(static_cast<std::int64_t>(std::floor(R)), w.r_max());
  if (hi <= lo) return 0.0;
  const auto mult = window_multiplier(seq.size(), phi);
  const auto corr = ramanujan_correlations(seq, hi, mult);
  Accumulator acc;
  for (std::int64_t q = lo + 1; q <= hi; ++q) {
    acc.add(std::abs(weight_sum_q(w, q)) * std::abs(corr[static_cast<std::size_t>(q - 1)]));
  }
  return acc.value();
}

NewpropCheck check_newprop(const Sequence& seq, const WeightSet& w, const SmoothWindow& phi,
                           const ArcSystem& arcs, double R, const Spectrum& spec_a, const Spectrum& spec_tilde,
                           const ArcGrid& grid) {
  NewpropCheck c;
  c.rhs = newprop_rhs(seq, w, phi, arcs, R);
  const auto ab = minor_abs_product_integral(spec_a, spec_tilde, grid);
  c.abs_integral = ab.value;
  c.abs_error = ab.error_bound;
  const double nd = static_cast<double>(seq.size());
  c.slack_term = w.B * R * std::pow(nd, 0.5 + phi.eps());
  const double excess = c.rhs - c.abs_integral - c.abs_error;
  c.slack_constant = excess > 0.0 && c.slack_term > 0.0 ? excess / c.slack_term : 0.0;
  c.holds = c.slack_constant <= 1.0;
  return c;
}

}  // namespace apvar
