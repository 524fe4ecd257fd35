#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "apvar/arith.hpp"
#include "apvar/circle.hpp"
#include "apvar/windows.hpp"

namespace apvar {

inline constexpr int kReportSchemaVersion = 1;

enum class TheoremKind { kTheorem1, kTheorem2 };
enum class Ending { kFirst, kSecond };
const char* to_string(TheoremKind t);
const char* to_string(Ending e);

/// Parameters for one chain run. The nominal asymptotic choices are kept
/// alongside the values actually used; every adjustment is listed in `clips`.
struct ExperimentConfig {
  TheoremKind theorem = TheoremKind::kTheorem1;
  Ending ending = Ending::kFirst;
  double N = 1e5;
  double Q = 1.0;
  double K = 5.0;
  double Q0 = 1.0;
  double R = 2.0;
  double eps = 0.05;
  double delta = 0.1;
  int k = 2;
  std::int64_t T = 0;  // 0: default_grid_size(N)
  std::uint64_t seed = 1;
  double K_nominal = 0.0, Q0_nominal = 0.0, R_nominal = 0.0;
  std::vector<std::string> clips;

  std::int64_t n() const { return static_cast<std::int64_t>(N); }
  ArcSystem arcs() const;
  /// Throws PreconditionError with an actionable message.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Theorem 1: K = (log N)^2, Q0 = N (log N)^10 / Q, R = Q / (log N)^20, then
/// the desk-scale adjustments.
ExperimentConfig theorem1_config(double n, double q, double eps = 0.05);
/// Theorem 2: K = (log N)^10, Q0 = N^(1+eps) / Q; R from the ending.
ExperimentConfig theorem2_config(double n, double q, int k, double delta, Ending ending, double eps = 0.05);

/// Sum_{q<=Q} (1/q) Sum_{d | q, d > Q0} |Sum a_n c_d(n)|^2 / phi(d).
double ramanujan_tail(const Sequence& seq, std::int64_t q_max, double q0);
/// Same sum from precomputed correlations (element d - 1).
double ramanujan_tail(std::span<const double> corr, std::int64_t q_max, double q0);

struct Prop13Report {
  double lhs_variance_sum = 0.0;     // Sum_{Q0<q<=Q} V(q)
  double restricted_sum = 0.0;       // Sum_{q<=Q} restricted variance
  double cor1_sum = 0.0;             // Sum_{Q0<q<=Q} (1/q) cor1 lower bound
  double discrete_sum = 0.0;         // Sum_{Q0<q<=Q} (1/q) Sum_{q/(a,q)>Q0} |A(a/q)|^2
  double minor_integral = 0.0;
  double minor_error = 0.0;
  double major_integral = 0.0;
  double ramanujan_tail = 0.0;
  double slack = 0.0;                // (5 + log K) / K
  double large_sieve_term = 0.0;     // N K / Q0 Sum |a_n|^2
  double o_constant_fit = 0.0;       // smallest C closing the discrete link
  double o_constant_allowed = 0.0;
  double final_lower_bound = 0.0;    // Q(1-slack)(minor - err) - tail - C_allowed * large sieve term
  bool cor1_link = false;            // lhs >= cor1_sum
  bool tail_link = false;            // cor1_sum == discrete_sum - tail
  bool discrete_link = false;        // o_constant_fit <= o_constant_allowed
  bool chain_holds = false;          // lhs >= final_lower_bound and all links
  std::vector<double> variance_profile;  // V(q) for q = 1..Q; not serialized

  nlohmann::json to_json() const;
};

/// Allowance for the implied constant of the large-sieve O-term.
inline constexpr double kProp13OConstant = 1.0;

Prop13Report assemble_prop13(const Sequence& seq, const ExperimentConfig& cfg, const Spectrum& spec,
                             const ArcGrid& grid);
/// Builds the spectrum and arc grid from cfg.
Prop13Report assemble_prop13(const Sequence& seq, const ExperimentConfig& cfg);

struct CauchySchwarzReport {
  double cross_abs = 0.0;        // |int_m A conj(A~)|
  double cross_error = 0.0;
  double complement_cross = 0.0; // |Sum a_n a~_n - int_M A conj(A~)|
  double complement_residual = 0.0;
  double abs_integral = 0.0;     // int_m |A A~|
  double abs_error = 0.0;
  double tilde_minor = 0.0;      // int_m |A~|^2
  double tilde_error = 0.0;
  double tilde_complement = 0.0; // Sum |a~_n|^2 - int_M |A~|^2
  double minor_a = 0.0;          // int_m |A|^2
  double minor_a_error = 0.0;
  double bound_17 = 0.0;         // |cross|^2 / tilde_minor
  double bound_113 = 0.0;        // abs_integral^2 / tilde_minor
  double bound_17_error = 0.0;
  double bound_113_error = 0.0;
  double bound_17_certified = 0.0;   // lower end of its error bar
  double bound_113_certified = 0.0;
  bool holds = false;            // both bounds <= minor_a within the combined error bars

  nlohmann::json to_json() const;
};

CauchySchwarzReport cauchy_schwarz_bound(const Sequence& seq, const Sequence& tilde, const ArcGrid& grid,
                                         const Spectrum& spec_a, const Spectrum& spec_tilde);

/// Sum_{KQ0 < q <= R} |Sum_{q|r} b_r / r| |Sum_n a_n c_q(n) Phi(n/N)|.
double newprop_rhs(const Sequence& seq, const WeightSet& w, const SmoothWindow& phi, const ArcSystem& arcs,
                   double R);

struct NewpropCheck {
  double rhs = 0.0;
  double abs_integral = 0.0;
  double abs_error = 0.0;
  double slack_term = 0.0;      // B R N^(1/2 + eps)
  double slack_constant = 0.0;  // max(0, rhs - abs_integral - abs_error) / slack_term
  bool holds = false;           // slack_constant <= 1
};

NewpropCheck check_newprop(const Sequence& seq, const WeightSet& w, const SmoothWindow& phi,
                           const ArcSystem& arcs, double R, const Spectrum& spec_a, const Spectrum& spec_tilde,
                           const ArcGrid& grid);

struct BoundReport {
  ExperimentConfig config;
  std::string sequence;
  Prop13Report prop13;
  CauchySchwarzReport cs;
  double target = 0.0;            // comparison target
  double final_bound = 0.0;
  double ratio = 0.0;             // final_bound / target scale
  double fitted_constant = 0.0;   // theorem 1: C in log(Q^2/N) - C log log N
  bool degenerate_range = false;
  bool chain_sound = false;
  nlohmann::json details;         // calibrations, ending-specific data
  std::vector<std::pair<double, double>> plot;  // (x, y) series
  std::string plot_header = "x,y";

  nlohmann::json to_json() const;
  std::string csv_header() const;
  std::string csv_row() const;
};

BoundReport run_theorem1(const ExperimentConfig& cfg);
BoundReport run_theorem2(const ExperimentConfig& cfg);

/// Fixed 12-significant-digit formatting used by every report.
std::string format_double(double v);

}  // namespace apvar
