#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "apvar/circle.hpp"

namespace apvar {

namespace {

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct Interval {
  double lo, hi;
};

// Moments of [l, r] inside a cell, offsets relative to the cell centre.
struct CellMoments {
  double w = 0.0, m1 = 0.0, m1_abs = 0.0, m2 = 0.0;
  void add(double l, double r) {
    if (r <= l) return;
    auto abs_prim = [](double x) { return x >= 0 ? x * x / 2.0 : -x * x / 2.0; };
    w += r - l;
    m1 += (r * r - l * l) / 2.0;
    m1_abs += abs_prim(r) - abs_prim(l);
    m2 += (r * r * r - l * l * l) / 3.0;
  }
};

constexpr double kFullM1Abs = 0.25;
constexpr double kFullM2 = 1.0 / 12.0;
constexpr std::int64_t kMaxIntervals = 60'000'000;

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::int64_t ArcSystem::max_denominator() const {
  return static_cast<std::int64_t>(std::floor(K * Q0 + 1e-9));
}

std::vector<std::string> ArcSystem::warnings() const {
  std::vector<std::string> w;
  const double nlog = static_cast<double>(N) * std::log(static_cast<double>(N));
  if (K < 5.0) w.push_back("K=" + fmt_num(K) + " is below 5");
  if (Q0 < nlog / Q) w.push_back("Q0=" + fmt_num(Q0) + " is below N log N / Q = " + fmt_num(nlog / Q));
  if (Q0 > Q / (K * K)) w.push_back("Q0=" + fmt_num(Q0) + " exceeds Q / K^2 = " + fmt_num(Q / (K * K)));
  if (Q < K * std::sqrt(nlog)) w.push_back("Q=" + fmt_num(Q) + " is below K sqrt(N log N) = " + fmt_num(K * std::sqrt(nlog)));
  if (Q > static_cast<double>(N)) w.push_back("Q=" + fmt_num(Q) + " exceeds N");
  return w;
}

nlohmann::json ArcSystem::to_json() const {
  return {{"K", K}, {"Q0", Q0}, {"Q", Q}, {"N", N}, {"warnings", warnings()}};
}

MajorWitness is_major(double alpha, const ArcSystem& arcs) {
  const double x = alpha - std::floor(alpha);
  const double tol = arcs.K / arcs.Q;
  const std::int64_t qmax = arcs.max_denominator();
  for (std::int64_t q = 1; q <= qmax; ++q) {
    const double xq = x * static_cast<double>(q);
    const double a = std::nearbyint(xq);
    if (std::abs(xq - a) <= tol) {
      auto ai = static_cast<std::int64_t>(a);
      const std::int64_t g = std::gcd(ai, q);
      const std::int64_t qr = q / g;
      return {true, (ai / g) % qr, qr};
    }
  }
  return {};
}

double farey_density_lower_bound(const ArcSystem& arcs) {
  return 2.0 * arcs.K / arcs.Q0 * (1.0 - 5.0 / arcs.K - std::log(arcs.K) / arcs.K);
}

double farey_density_f(double alpha, const ArcSystem& arcs) {
  require(arcs.Q0 < arcs.Q, "farey_density_f: requires Q0 < Q");
  const auto q_lo = static_cast<std::int64_t>(std::floor(arcs.Q0)) + 1;
  const auto q_hi = static_cast<std::int64_t>(std::floor(arcs.Q));
  if (q_hi > limits().max_farey_q) {
    throw CapacityError("farey_density_f: Q=" + std::to_string(q_hi) + " exceeds the enumeration cap " +
                        std::to_string(limits().max_farey_q));
  }
  const double x = alpha - std::floor(alpha);
  const double delta = arcs.K / (arcs.Q0 * arcs.Q);
  auto admissible = [&](std::int64_t a, std::int64_t q) {
    return static_cast<double>(q / std::gcd(a, q)) > arcs.Q0;
  };
  Neumaier f;
  for (std::int64_t q = q_lo; q <= q_hi; ++q) {
    const double qd = static_cast<double>(q);
    const auto lo = static_cast<std::int64_t>(std::ceil(qd * (x - delta) - 1e-12));
    const auto hi = static_cast<std::int64_t>(std::floor(qd * (x + delta) + 1e-12));
    std::int64_t count = 0;
    if (hi - lo + 1 >= q) {
      for (std::int64_t a = 0; a < q; ++a) count += admissible(a, q);
    } else {
      for (std::int64_t a = lo; a <= hi; ++a) {
        // Exact distance test on the lattice point: |x - a/q| <= delta.
        if (std::abs(x * qd - static_cast<double>(a)) > delta * qd * (1 + 1e-12)) continue;
        const std::int64_t r = ((a % q) + q) % q;
        count += admissible(r, q);
      }
    }
    if (count > 0) f.add(static_cast<double>(count) / qd);
  }
  return f.value();
}

ArcGrid classify_arcs(const ArcSystem& arcs, std::int64_t T) {
  require(T >= 2, "classify_arcs: T must be >= 2");
  require(arcs.K > 0 && arcs.Q > 0, "classify_arcs: K and Q must be positive");
  const std::int64_t qmax = arcs.max_denominator();
  const double est = 0.31 * static_cast<double>(qmax) * static_cast<double>(qmax) + 2.0;
  if (qmax > limits().max_farey_q || est > static_cast<double>(kMaxIntervals)) {
    throw CapacityError("classify_arcs: K Q0 = " + std::to_string(qmax) + " needs too many Farey fractions");
  }

  ArcGrid g;
  g.T = T;
  g.state.assign(static_cast<std::size_t>(T), ArcGrid::kMinor);
  const double Td = static_cast<double>(T);
  const double left = -0.5;
  const double right = Td - 0.5;

  std::vector<Interval> iv;
  bool whole = false;
  if (qmax >= 1) {
    // Farey sequence of order qmax on [0, 1), generated in order.
    std::int64_t a = 0, b = 1, c = 1, d = qmax;
    while (true) {
      const double centre = static_cast<double>(a) / static_cast<double>(b) * Td;
      const double radius = arcs.K / (static_cast<double>(b) * arcs.Q) * Td;
      ++g.interval_count;
      if (2.0 * radius >= Td) {
        whole = true;
        break;
      }
      const double lo = centre - radius, hi = centre + radius;
      if (lo < left) {
        iv.push_back({lo + Td, right});
        iv.push_back({left, hi});
      } else if (hi > right) {
        iv.push_back({lo, right});
        iv.push_back({left, hi - Td});
      } else {
        iv.push_back({lo, hi});
      }
      if (c == d) break;  // next term is 1/1
      const std::int64_t k = (qmax + b) / d;
      const std::int64_t nc = k * c - a, nd = k * d - b;
      a = c;
      b = d;
      c = nc;
      d = nd;
    }
  }

  if (whole) {
    std::fill(g.state.begin(), g.state.end(), ArcGrid::kMajor);
    g.minor_measure = 0.0;
    return g;
  }

  std::sort(iv.begin(), iv.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> merged;
  for (const auto& x : iv) {
    if (!merged.empty() && x.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, x.hi);
    } else {
      merged.push_back(x);
    }
  }

  std::vector<std::pair<std::int64_t, CellMoments>> cover;  // major part of partial cells
  auto add_partial = [&](std::int64_t t, double l, double r) {
    if (cover.empty() || cover.back().first != t) cover.push_back({t, CellMoments{}});
    cover.back().second.add(l - static_cast<double>(t), r - static_cast<double>(t));
  };
  for (const auto& m : merged) {
    const double lo = std::max(m.lo, left), hi = std::min(m.hi, right);
    if (hi <= lo) continue;
    const auto tl = static_cast<std::int64_t>(std::floor(lo + 0.5));
    auto th = static_cast<std::int64_t>(std::floor(hi + 0.5));
    th = std::min(th, T - 1);
    if (tl == th) {
      add_partial(tl, lo, hi);
      continue;
    }
    add_partial(tl, lo, static_cast<double>(tl) + 0.5);
    for (std::int64_t t = tl + 1; t < th; ++t) g.state[static_cast<std::size_t>(t)] = ArcGrid::kMajor;
    add_partial(th, static_cast<double>(th) - 0.5, hi);
  }

  for (const auto& [t, mm] : cover) {
    auto& st = g.state[static_cast<std::size_t>(t)];
    const double minor_w = 1.0 - mm.w;
    if (minor_w <= 1e-14) {
      st = ArcGrid::kMajor;
      continue;
    }
    st = ArcGrid::kPartial;
    g.partial.push_back({t, minor_w, -mm.m1, kFullM1Abs - mm.m1_abs, kFullM2 - mm.m2});
  }

  Neumaier measure;
  for (std::uint8_t s : g.state) {
    if (s == ArcGrid::kMinor) measure.add(1.0);
  }
  for (const auto& p : g.partial) measure.add(p.weight);
  g.minor_measure = measure.value() / Td;
  return g;
}

nlohmann::json ArcGrid::to_rle_json() const {
  static const char* names[] = {"M", "m", "p"};
  nlohmann::json runs = nlohmann::json::array();
  std::size_t i = 0;
  while (i < state.size()) {
    std::size_t j = i;
    while (j < state.size() && state[j] == state[i]) ++j;
    runs.push_back({names[state[i]], j - i});
    i = j;
  }
  return {{"T", T}, {"minor_measure", minor_measure}, {"runs", runs}};
}

namespace {

// Visits every cell with a minor part as (t, weight, m1, m1_abs, m2) and every
// cell with a major part as (t, 1 - weight) through separate callbacks.
template <class MinorFn, class MajorFn>
void for_each_cell(const ArcGrid& grid, MinorFn&& minor, MajorFn&& major) {
  std::size_t p = 0;
  for (std::int64_t t = 0; t < grid.T; ++t) {
    switch (grid.state[static_cast<std::size_t>(t)]) {
      case ArcGrid::kMinor:
        minor(t, 1.0, 0.0, kFullM1Abs, kFullM2);
        break;
      case ArcGrid::kMajor:
        major(t, 1.0);
        break;
      default: {
        const auto& c = grid.partial[p++];
        minor(t, c.weight, c.m1, c.m1_abs, c.m2);
        major(t, 1.0 - c.weight);
      }
    }
  }
}

}  // namespace

ArcIntegral minor_arc_integral(const Spectrum& spec, const ArcGrid& grid) {
  require(spec.T == grid.T, "minor_arc_integral: grid size mismatch");
  const double h = 1.0 / static_cast<double>(spec.T);
  Neumaier value, major, err;
  for_each_cell(
      grid,
      [&](std::int64_t t, double w, double m1, double, double m2) {
        const auto i = static_cast<std::size_t>(t);
        value.add(w * spec.power[i]);
        const double f1 = 2.0 * std::abs(spec.values[i]) * spec.deriv_abs[i];
        const double f2 = 2.0 * (spec.sup0[i] * spec.sup2[i] + spec.sup1[i] * spec.sup1[i]);
        err.add(f1 * std::abs(m1) * h + f2 * m2 * h * h / 2.0);
      },
      [&](std::int64_t t, double w) { major.add(w * spec.power[static_cast<std::size_t>(t)]); });
  ArcIntegral r;
  r.value = value.value() * h;
  r.major_value = major.value() * h;
  r.error_bound = err.value() * h;
  r.complement_value = spec.sum_squares - r.major_value;
  return r;
}

ArcIntegral minor_arc_integral(const Spectrum& spec, const ArcSystem& arcs) {
  return minor_arc_integral(spec, classify_arcs(arcs, spec.T));
}

CrossIntegral minor_cross_integral(const Spectrum& a, const Spectrum& b, const ArcGrid& grid) {
  require(a.T == grid.T && b.T == grid.T, "minor_cross_integral: grid size mismatch");
  const double h = 1.0 / static_cast<double>(grid.T);
  Neumaier re, im, mre, mim, err;
  for_each_cell(
      grid,
      [&](std::int64_t t, double w, double m1, double, double m2) {
        const auto i = static_cast<std::size_t>(t);
        const auto z = a.values[i] * std::conj(b.values[i]);
        re.add(w * z.real());
        im.add(w * z.imag());
        const double g1 = a.deriv_abs[i] * std::abs(b.values[i]) + std::abs(a.values[i]) * b.deriv_abs[i];
        const double g2 = a.sup2[i] * b.sup0[i] + 2.0 * a.sup1[i] * b.sup1[i] + a.sup0[i] * b.sup2[i];
        err.add(g1 * std::abs(m1) * h + g2 * m2 * h * h / 2.0);
      },
      [&](std::int64_t t, double w) {
        const auto i = static_cast<std::size_t>(t);
        const auto z = a.values[i] * std::conj(b.values[i]);
        mre.add(w * z.real());
        mim.add(w * z.imag());
      });
  CrossIntegral r;
  r.value = {re.value() * h, im.value() * h};
  r.major_value = {mre.value() * h, mim.value() * h};
  r.error_bound = err.value() * h;
  return r;
}

ArcIntegral minor_abs_product_integral(const Spectrum& a, const Spectrum& b, const ArcGrid& grid) {
  require(a.T == grid.T && b.T == grid.T, "minor_abs_product_integral: grid size mismatch");
  const double h = 1.0 / static_cast<double>(grid.T);
  Neumaier value, major, err;
  for_each_cell(
      grid,
      [&](std::int64_t t, double w, double, double m1_abs, double) {
        const auto i = static_cast<std::size_t>(t);
        value.add(w * std::abs(a.values[i]) * std::abs(b.values[i]));
        const double lip = a.sup1[i] * b.sup0[i] + a.sup0[i] * b.sup1[i];
        err.add(lip * m1_abs * h);
      },
      [&](std::int64_t t, double w) {
        const auto i = static_cast<std::size_t>(t);
        major.add(w * std::abs(a.values[i]) * std::abs(b.values[i]));
      });
  ArcIntegral r;
  r.value = value.value() * h;
  r.major_value = major.value() * h;
  r.error_bound = err.value() * h;
  r.complement_value = r.value;
  return r;
}

}  // namespace apvar
