#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "apvar/arith.hpp"

namespace apvar {

/// A(alpha) = Sum_{n<=N} a_n e(n alpha), compensated summation.
std::complex<double> eval_exp_sum(const Sequence& seq, double alpha);

/// Smallest power of two >= 16 N.
std::int64_t default_grid_size(std::int64_t n);

/// Samples of A on the grid t/T together with the local derivative data used
/// to certify quadrature errors.
///
/// For every grid point t the arrays sup0, sup1, sup2 bound |A|, |A'|, |A''|
/// over the cell [t - 1/2, t + 1/2] / T. They come from a Taylor expansion in
/// the exact grid values of A, ..., A'''' with a remainder controlled by the
/// global bound |A^(j)| <= (2 pi N)^j Sum |a_n|.
struct Spectrum {
  std::int64_t T = 0;
  std::int64_t N = 0;
  std::vector<std::complex<double>> values;  // A(t/T)
  std::vector<double> power;                 // |A(t/T)|^2
  std::vector<double> deriv_abs;             // |A'(t/T)|
  std::vector<double> sup0, sup1, sup2;
  double total_mass = 0.0;        // (1/T) Sum_t |A(t/T)|^2
  double sum_squares = 0.0;       // Sum |a_n|^2
  double sum_abs = 0.0;           // Sum |a_n|
  double derivative_bound = 0.0;  // 2 pi N Sum |a_n| >= sup |A'|

  /// 8-byte little-endian T, then T little-endian doubles |A(t/T)|^2.
  void export_binary(const std::string& path) const;
};

/// All A(t/T) by a zero-padded real FFT. Requires T a power of two, T >= 2N.
Spectrum build_spectrum(const Sequence& seq, std::int64_t T = 0);

/// Major arcs: alpha with |alpha - a/q| <= K/(qQ), q <= K Q0, (a,q) = 1.
struct ArcSystem {
  double K = 5.0;
  double Q0 = 1.0;
  double Q = 1.0;
  std::int64_t N = 1;

  std::int64_t max_denominator() const;  // floor(K Q0)
  /// Human-readable violations of K >= 5, N log N / Q <= Q0 <= Q / K^2 and
  /// K sqrt(N log N) <= Q <= N. Empty when all hold.
  std::vector<std::string> warnings() const;
  nlohmann::json to_json() const;
};

struct MajorWitness {
  bool major = false;
  std::int64_t a = 0;
  std::int64_t q = 0;
};

/// Scan q <= K Q0 with the nearest numerator; the witness is reduced.
MajorWitness is_major(double alpha, const ArcSystem& arcs);

/// f(alpha) = Sum_{Q0<q<=Q} (1/q) #{a mod q : q/(a,q) > Q0, ||alpha - a/q|| <= K/(Q0 Q)}.
double farey_density_f(double alpha, const ArcSystem& arcs);
/// (2K/Q0)(1 - 5/K - log K / K).
double farey_density_lower_bound(const ArcSystem& arcs);

/// Major arcs painted on a grid of T cells, cell t covering [t - 1/2, t + 1/2] / T.
/// Cells are fully major, fully minor, or partial; partial cells carry the
/// moments of their minor part about the cell centre.
struct ArcGrid {
  enum State : std::uint8_t { kMajor = 0, kMinor = 1, kPartial = 2 };
  struct PartialCell {
    std::int64_t t = 0;
    double weight = 0.0;  // minor fraction of the cell
    double m1 = 0.0;      // int_{minor part} delta d delta   (cell units)
    double m1_abs = 0.0;  // int |delta|
    double m2 = 0.0;      // int delta^2
  };

  std::int64_t T = 0;
  std::vector<std::uint8_t> state;
  std::vector<PartialCell> partial;  // ascending t
  std::int64_t interval_count = 0;   // major intervals before merging
  double minor_measure = 0.0;

  /// {"T": T, "runs": [[state, length], ...]} with states "M", "m", "p".
  nlohmann::json to_rle_json() const;
};

ArcGrid classify_arcs(const ArcSystem& arcs, std::int64_t T);

struct ArcIntegral {
  double value = 0.0;             // weighted midpoint sum over the minor arcs
  double error_bound = 0.0;       // certified |exact - value|
  double major_value = 0.0;       // same over the major arcs
  double complement_value = 0.0;  // Sum |a_n|^2 - major_value
};

/// int_m |A|^2.
ArcIntegral minor_arc_integral(const Spectrum& spec, const ArcGrid& grid);
ArcIntegral minor_arc_integral(const Spectrum& spec, const ArcSystem& arcs);

struct CrossIntegral {
  std::complex<double> value;  // int_m A conj(B)
  double error_bound = 0.0;
  std::complex<double> major_value;
};

/// int_m A conj(B) for spectra on the same grid.
CrossIntegral minor_cross_integral(const Spectrum& a, const Spectrum& b, const ArcGrid& grid);

/// int_m |A B| (Lipschitz integrand, first-order error bound).
ArcIntegral minor_abs_product_integral(const Spectrum& a, const Spectrum& b, const ArcGrid& grid);

}  // namespace apvar
