#include <cmath>
#include <numbers>

#include "apvar/dirichlet.hpp"
#include "apvar/pipeline.hpp"

namespace apvar {

namespace {

struct Chain {
  Sequence seq;
  std::int64_t T = 0;
  Spectrum spec_a;
  ArcGrid grid;
  SmoothWindow phi;
  WeightSet w;
  Sequence tilde;
  Spectrum spec_tilde;
};

Chain build_chain(Sequence seq, const ExperimentConfig& cfg, WeightKind kind) {
  Chain c;
  c.seq = std::move(seq);
  c.T = cfg.T > 0 ? cfg.T : default_grid_size(c.seq.size());
  c.spec_a = build_spectrum(c.seq, c.T);
  c.grid = classify_arcs(cfg.arcs(), c.T);
  c.phi = SmoothWindow::build(cfg.eps);
  c.w = build_weights(kind, cfg.R, cfg.k);
  c.tilde = build_tilde_sequence(c.seq.size(), c.w, c.phi);
  c.spec_tilde = build_spectrum(c.tilde, c.T);
  return c;
}

// Residues at s = 1 of base(s) F_q(s) over many q, with base(s) = zeta^k N^s M(s)
// sampled once on the 64- and 128-node circles.
class ResidueBatch {
 public:
  ResidueBatch(int k, double n, const SmoothWindow& phi) : k_(k) {
    radius_ = 1.0 / std::log(n);
    for (int nodes : {64, 128}) {
      auto& level = levels_.emplace_back();
      for (int l = 0; l < nodes; ++l) {
        const double theta = 2.0 * std::numbers::pi * (l + 0.5) / nodes;
        const cplx z = radius_ * cplx(std::cos(theta), std::sin(theta));
        const cplx s = 1.0 + z;
        level.s.push_back(s);
        level.weight.push_back(std::pow(zeta_near_one(s), k) * std::exp(s * std::log(n)) * phi.mellin(s) * z /
                               static_cast<double>(nodes));
      }
    }
  }

  ResiduePrediction operator()(std::int64_t q) const {
    const LocalFactorSet lf(q, k_);
    cplx v[2];
    for (int i = 0; i < 2; ++i) {
      cplx acc = 0.0;
      for (std::size_t l = 0; l < levels_[static_cast<std::size_t>(i)].s.size(); ++l) {
        acc += levels_[static_cast<std::size_t>(i)].weight[l] * lf.F(levels_[static_cast<std::size_t>(i)].s[l]);
      }
      v[i] = acc;
    }
    ResiduePrediction r;
    r.value = v[0].real();
    r.radius = radius_;
    r.nodes = 64;
    r.error = 2.0 * std::abs(v[1] - v[0]) + std::abs(v[0].imag()) + 1e-14 * std::abs(v[0]);
    return r;
  }

 private:
  struct Level {
    std::vector<cplx> s;
    std::vector<cplx> weight;
  };
  int k_;
  double radius_ = 0.0;
  std::vector<Level> levels_;
};

double final_from_chain(const ExperimentConfig& cfg, const Prop13Report& p, double cs_certified) {
  return cfg.Q * (1.0 - p.slack) * cs_certified - p.ramanujan_tail - p.o_constant_fit * p.large_sieve_term;
}

void fill_profile_plot(BoundReport& rep) {
  rep.plot_header = "q,V";
  const auto& v = rep.prop13.variance_profile;
  rep.plot.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) rep.plot.emplace_back(static_cast<double>(i + 1), v[i]);
}

}  // namespace

BoundReport run_theorem1(const ExperimentConfig& cfg) {
  require(cfg.theorem == TheoremKind::kTheorem1, "run_theorem1: config is not a theorem1 config");
  cfg.validate();
  const auto n = cfg.n();
  const auto table = sieve_all(n, 2);
  auto chain = build_chain(table.lambda_sequence(), cfg, WeightKind::kPrimeSieve);

  BoundReport rep;
  rep.config = cfg;
  rep.config.T = chain.T;
  rep.sequence = "lambda";
  rep.prop13 = assemble_prop13(chain.seq, cfg, chain.spec_a, chain.grid);
  rep.cs = cauchy_schwarz_bound(chain.seq, chain.tilde, chain.grid, chain.spec_a, chain.spec_tilde);

  const double nd = cfg.N;
  const double logn = std::log(nd);
  const double loglogn = std::log(logn);
  const double log_q2n = std::log(cfg.Q * cfg.Q / nd);
  rep.target = cfg.Q * nd * log_q2n;
  rep.final_bound = final_from_chain(cfg, rep.prop13, rep.cs.bound_17_certified);
  rep.ratio = rep.target > 0 ? rep.final_bound / rep.target : 0.0;
  rep.fitted_constant = (log_q2n - rep.prop13.restricted_sum / (cfg.Q * nd)) / loglogn;
  rep.degenerate_range = log_q2n <= 8.0 * loglogn;
  rep.chain_sound = rep.prop13.chain_holds && rep.cs.holds &&
                    rep.prop13.lhs_variance_sum >= rep.final_bound;

  const auto c52 = calibrate_52(table, chain.tilde, chain.w, chain.phi);
  const auto c53 = calibrate_53(chain.tilde, chain.w, chain.phi);
  nlohmann::json c54 = nlohmann::json::array();
  for (std::int64_t q = 1; q <= std::min<std::int64_t>(30, chain.w.r_max()); ++q) {
    if (!is_squarefree(q)) continue;
    const auto c = calibrate_54(chain.w, q);
    c54.push_back({{"q", q}, {"value", c.value}, {"target", c.target}, {"deviation", c.deviation}});
  }
  const auto l5 = check_lemma5(chain.seq, chain.w, chain.phi);
  rep.details = {{"calibration_52", {{"value", c52.value}, {"main_term", c52.main_term}, {"error_over_n", c52.error_over_n}}},
                 {"calibration_53", {{"value", c53.value}, {"main_term", c53.main_term}, {"error_over_n", c53.error_over_n}}},
                 {"calibration_54", c54},
                 {"lemma5_residual", l5.residual},
                 {"restricted_over_QN_logQ", rep.prop13.restricted_sum / (cfg.Q * nd * std::log(cfg.Q))},
                 {"restricted_exceeds_final", rep.prop13.restricted_sum >= rep.final_bound},
                 {"log_Q2_over_N", log_q2n},
                 {"loglogN", loglogn},
                 {"minor_measure", chain.grid.minor_measure},
                 {"weights_B", chain.w.B}};
  fill_profile_plot(rep);
  return rep;
}

BoundReport run_theorem2(const ExperimentConfig& cfg) {
  require(cfg.theorem == TheoremKind::kTheorem2, "run_theorem2: config is not a theorem2 config");
  cfg.validate();
  const auto n = cfg.n();
  const int k = cfg.k;
  const auto table = sieve_all(n, k);
  auto chain = build_chain(table.divisor_sequence(k), cfg, WeightKind::kDivisor);

  BoundReport rep;
  rep.config = cfg;
  rep.config.T = chain.T;
  rep.sequence = "d" + std::to_string(k);
  rep.prop13 = assemble_prop13(chain.seq, cfg, chain.spec_a, chain.grid);
  rep.cs = cauchy_schwarz_bound(chain.seq, chain.tilde, chain.grid, chain.spec_a, chain.spec_tilde);

  const double nd = cfg.N;
  const double logn = std::log(nd);
  const int deg = k * k - 1;
  rep.target = cfg.Q * nd * std::pow(logn, deg);
  const auto lo = static_cast<std::int64_t>(std::floor(cfg.K * cfg.Q0));
  const auto hi = std::min(static_cast<std::int64_t>(std::floor(cfg.R)), chain.w.r_max());
  const auto mult = window_multiplier(n, chain.phi);
  const auto corr = ramanujan_correlations(chain.seq, std::max<std::int64_t>(hi, 1), mult);

  if (cfg.ending == Ending::kFirst) {
    const auto ws = weight_sums(chain.w);
    const ResidueBatch batch(k, nd, chain.phi);
    std::vector<double> predicted(static_cast<std::size_t>(std::max<std::int64_t>(hi - lo, 0)), 0.0);
    std::vector<double> errors(predicted.size(), 0.0);
    parallel_for(lo + 1, hi + 1, [&](std::int64_t q) {
      const auto r = batch(q);
      predicted[static_cast<std::size_t>(q - lo - 1)] = r.value;
      errors[static_cast<std::size_t>(q - lo - 1)] = r.error;
    });
    long double direct = 0.0L, pred = 0.0L, pred_err = 0.0L;
    for (std::int64_t q = lo + 1; q <= hi; ++q) {
      const double wq = ws[static_cast<std::size_t>(q - 1)];
      direct += wq * corr[static_cast<std::size_t>(q - 1)];
      pred += wq * predicted[static_cast<std::size_t>(q - lo - 1)];
      pred_err += std::abs(wq) * errors[static_cast<std::size_t>(q - lo - 1)];
    }
    const double direct_d = static_cast<double>(direct);
    const double pred_d = static_cast<double>(pred);
    const auto sc = singular_constant(k, 100000);
    const double poly = polynomial_69(k, logn, std::log(cfg.R), std::log(cfg.K * cfg.Q0));
    const double main_term = nd * sc.product * chain.phi.integral() * poly;
    const double q0_eff = std::max(cfg.Q0, 1.01 * cfg.K * cfg.Q0 / std::pow(nd, cfg.eps));
    const auto choice = choose_R_chebyshev(k, nd, q0_eff, cfg.Q, cfg.K, cfg.eps);
    rep.details = {{"ending", "first"},
                   {"q_range", {lo + 1, hi}},
                   {"sum_66_direct", direct_d},
                   {"sum_66_residue", pred_d},
                   {"sum_66_residue_error", static_cast<double>(pred_err)},
                   {"sum_66_relative_gap", direct_d != 0.0 ? std::abs(direct_d - pred_d) / std::abs(direct_d) : 0.0},
                   {"polynomial_69", poly},
                   {"main_term_69", main_term},
                   {"singular_product", sc.product},
                   {"chebyshev",
                    {{"alpha", choice.alpha},
                     {"alpha_lo", choice.alpha_lo},
                     {"alpha_hi", choice.alpha_hi},
                     {"value", choice.value},
                     {"floor", choice.floor},
                     {"sharp_floor", choice.sharp_floor},
                     {"certified", choice.certified}}}};
    rep.final_bound = final_from_chain(cfg, rep.prop13, rep.cs.bound_17_certified);
    rep.plot_header = "alpha,polynomial_69";
    rep.plot = choice.grid;
  } else {
    long double altpr1 = 0.0L;
    std::int64_t admissible = 0;
    double min_ratio = INFINITY, min_scaled = INFINITY;
    std::vector<std::int64_t> qs;
    for (std::int64_t q = lo + 1; q <= hi; ++q) {
      if (ramdkeval_admissible(q, nd, cfg.delta)) qs.push_back(q);
    }
    std::vector<RamdkevalResult> res(qs.size());
    parallel_for(0, static_cast<std::int64_t>(qs.size()), [&](std::int64_t i) {
      res[static_cast<std::size_t>(i)] = residue_ramdkeval(qs[static_cast<std::size_t>(i)], k, nd, cfg.delta);
    });
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::int64_t q = qs[i];
      const double qd = static_cast<double>(q);
      const double dk1 = static_cast<double>(divisor_k(k - 1, q));
      const double phi_ratio = static_cast<double>(euler_phi(q)) / qd;
      altpr1 += dk1 / qd * std::pow(phi_ratio * std::log(cfg.R / qd), k - 1) *
                std::abs(corr[static_cast<std::size_t>(q - 1)]);
      ++admissible;
      min_ratio = std::min(min_ratio, res[i].ratio);
      min_scaled = std::min(min_scaled, res[i].scaled);
    }
    const auto np = check_newprop(chain.seq, chain.w, chain.phi, cfg.arcs(), cfg.R, chain.spec_a, chain.spec_tilde,
                                  chain.grid);
    rep.details = {{"ending", "second"},
                   {"q_range", {lo + 1, hi}},
                   {"admissible_q", admissible},
                   {"altpr1_rhs", static_cast<double>(altpr1)},
                   {"ramdkeval_min_ratio", admissible ? min_ratio : 0.0},
                   {"ramdkeval_c_prime", admissible ? min_scaled : 0.0},
                   {"newprop_rhs", np.rhs},
                   {"newprop_abs_integral", np.abs_integral},
                   {"newprop_abs_error", np.abs_error},
                   {"newprop_slack_constant", np.slack_constant},
                   {"newprop_holds", np.holds}};
    rep.final_bound = final_from_chain(cfg, rep.prop13, rep.cs.bound_113_certified);
    fill_profile_plot(rep);
    rep.chain_sound = np.holds;
  }
  rep.ratio = rep.final_bound / rep.target;
  const bool base = rep.prop13.chain_holds && rep.cs.holds && rep.prop13.lhs_variance_sum >= rep.final_bound;
  rep.chain_sound = cfg.ending == Ending::kSecond ? (base && rep.chain_sound) : base;
  return rep;
}

}  // namespace apvar
