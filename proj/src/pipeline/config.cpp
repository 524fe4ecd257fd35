#include <cmath>
#include <cstdio>

#include "apvar/dirichlet.hpp"
#include "apvar/pipeline.hpp"

namespace apvar {

const char* to_string(TheoremKind t) { return t == TheoremKind::kTheorem1 ? "theorem1" : "theorem2"; }
const char* to_string(Ending e) { return e == Ending::kFirst ? "first" : "second"; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

// R is assumed non-integer: move it to the nearest half-integer below N.
double half_integer(double r, double n) {
  double h = std::floor(r) + 0.5;
  if (h > n) h = std::floor(n) - 0.5;
  return h;
}

void clip(ExperimentConfig& c, const std::string& what, double from, double to) {
  c.clips.push_back(what + ": " + format_double(from) + " -> " + format_double(to));
}

}  // namespace

ArcSystem ExperimentConfig::arcs() const { return {K, Q0, Q, n()}; }

void ExperimentConfig::validate() const {
  require(N >= 100, "N must be at least 100 (got " + format_double(N) + ")");
  require(N <= static_cast<double>(limits().max_sieve_n),
          "N=" + format_double(N) + " exceeds the sieve cap " + std::to_string(limits().max_sieve_n));
  require(Q >= 1 && Q <= N, "Q must lie in [1, N]; use --Q-exp in (0, 1] (got Q=" + format_double(Q) + ")");
  require(K >= 1, "K must be >= 1");
  require(Q0 >= 1 && Q0 < Q, "Q0 must lie in [1, Q)");
  require(R >= 2 && R <= N, "R must lie in [2, N] (got " + format_double(R) + ")");
  require(eps > 0 && eps < 0.5, "epsilon must lie in (0, 0.5)");
  require(k >= 2 && k <= 6, "k must lie in [2, 6]");
  if (theorem == TheoremKind::kTheorem2) {
    require(Q >= std::pow(N, 0.5 + delta) * (1 - 1e-12),
            "theorem2 needs Q >= N^(1/2 + delta); raise --Q-exp above " + format_double(0.5 + delta));
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {{"theorem", to_string(theorem)},
                      {"N", N},
                      {"Q", Q},
                      {"K", K},
                      {"Q0", Q0},
                      {"R", R},
                      {"epsilon", eps},
                      {"delta", delta},
                      {"k", k},
                      {"T", T},
                      {"seed", seed},
                      {"K_nominal", K_nominal},
                      {"Q0_nominal", Q0_nominal},
                      {"R_nominal", R_nominal},
                      {"clips", clips},
                      {"arc_warnings", arcs().warnings()}};
  if (theorem == TheoremKind::kTheorem2) j["ending"] = to_string(ending);
  return j;
}

ExperimentConfig theorem1_config(double n, double q, double eps) {
  require(n >= 100, "theorem1: N must be at least 100");
  require(q >= 1 && q <= n, "theorem1: Q must lie in [1, N]; use --Q-exp in (0, 1]");
  ExperimentConfig c;
  c.theorem = TheoremKind::kTheorem1;
  c.N = n;
  c.Q = q;
  c.eps = eps;
  const double logn = std::log(n);
  c.K_nominal = logn * logn;
  c.Q0_nominal = n * std::pow(logn, 10) / q;
  c.R_nominal = q / std::pow(logn, 20);

  const double q0_floor = std::max(1.0, n * logn / q);
  const double k_max = std::max(5.0, std::sqrt(q / (2.0 * q0_floor)));
  c.K = std::clamp(c.K_nominal, 5.0, k_max);
  if (c.K != c.K_nominal) clip(c, "K", c.K_nominal, c.K);
  const double q0_ceiling = q / (c.K * c.K);
  if (c.Q0_nominal >= q0_floor && c.Q0_nominal <= q0_ceiling) {
    c.Q0 = c.Q0_nominal;
  } else {
    c.Q0 = std::min(q0_floor, std::max(1.0, q / 2.0));
    clip(c, "Q0", c.Q0_nominal, c.Q0);
  }
  double r = c.R_nominal;
  if (r < 2.0 * c.K * c.Q0) {
    r = std::min(n, 4.0 * c.K * c.Q0);
  }
  c.R = half_integer(r, n);
  if (c.R != c.R_nominal) clip(c, "R", c.R_nominal, c.R);
  return c;
}

ExperimentConfig theorem2_config(double n, double q, int k, double delta, Ending ending, double eps) {
  require(n >= 100, "theorem2: N must be at least 100");
  require(q >= 1 && q <= n, "theorem2: Q must lie in [1, N]; use --Q-exp in (0, 1]");
  require(delta > 0 && delta < 0.5, "theorem2: delta must lie in (0, 0.5)");
  require(q >= std::pow(n, 0.5 + delta) * (1 - 1e-12),
          "theorem2: Q must be at least N^(1/2 + delta); raise --Q-exp above " + format_double(0.5 + delta));
  ExperimentConfig c;
  c.theorem = TheoremKind::kTheorem2;
  c.ending = ending;
  c.N = n;
  c.Q = q;
  c.k = k;
  c.delta = delta;
  c.eps = eps;
  const double logn = std::log(n);
  c.K_nominal = std::pow(logn, 10);
  c.Q0_nominal = std::pow(n, 1.0 + eps) / q;
  c.Q0 = std::max(1.0, c.Q0_nominal);
  if (c.Q0 != c.Q0_nominal) clip(c, "Q0", c.Q0_nominal, c.Q0);

  double k_max = std::sqrt(q / (2.0 * c.Q0));
  if (ending == Ending::kSecond) {
    c.R_nominal = std::pow(n, 0.5 - delta / 2.0);
    k_max = std::min(k_max, c.R_nominal / (2.0 * c.Q0));
  }
  c.K = std::clamp(c.K_nominal, 5.0, std::max(5.0, k_max));
  if (c.K != c.K_nominal) clip(c, "K", c.K_nominal, c.K);
  if (c.Q0 > q / (c.K * c.K)) {
    const double to = std::max(1.0, q / (c.K * c.K));
    clip(c, "Q0", c.Q0, to);
    c.Q0 = to;
  }

  if (ending == Ending::kSecond) {
    c.R = half_integer(c.R_nominal, n);
  } else {
    // The R-range must start above K Q0 for the sum over KQ0 < q <= R to be non-empty.
    const double q0_eff = std::max(c.Q0, 1.01 * c.K * c.Q0 / std::pow(n, eps));
    const auto choice = choose_R_chebyshev(k, n, q0_eff, q, c.K, eps);
    c.R_nominal = choice.R;
    c.R = half_integer(choice.R, n);
    if (q0_eff != c.Q0) clip(c, "R-range lower end", c.Q0 * std::pow(n, eps), q0_eff * std::pow(n, eps));
  }
  if (c.R != c.R_nominal) clip(c, "R", c.R_nominal, c.R);
  return c;
}

}  // namespace apvar
