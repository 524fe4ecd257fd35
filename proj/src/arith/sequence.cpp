#include <cmath>
#include <numeric>

#include "apvar/arith.hpp"
#include "apvar/simd/kernels.hpp"

namespace apvar {

namespace {
constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53
}

Sequence::Sequence(std::string name, std::vector<double> coeffs, bool integer_valued)
    : name_(std::move(name)), coeffs_(std::move(coeffs)), integer_valued_(integer_valued) {
  if (integer_valued_) {
    for (double v : coeffs_) {
      if (!(std::abs(v) < kMaxExactInteger) || std::nearbyint(v) != v) {
        throw PreconditionError("Sequence '" + name_ + "': flagged integer-valued but holds " +
                                std::to_string(v));
      }
    }
  }
}

Sequence Sequence::from_integers(std::string name, std::span<const std::int64_t> coeffs) {
  std::vector<double> v(coeffs.begin(), coeffs.end());
  return Sequence(std::move(name), std::move(v), true);
}

Sequence Sequence::zeros(std::int64_t n, std::string name) {
  return Sequence(std::move(name), std::vector<double>(static_cast<std::size_t>(n), 0.0), true);
}

Sequence Sequence::constant(std::int64_t n, double value, std::string name) {
  const bool integral = std::nearbyint(value) == value;
  return Sequence(std::move(name), std::vector<double>(static_cast<std::size_t>(n), value),
                  integral);
}

std::int64_t Sequence::integer(std::int64_t n) const {
  require(integer_valued_, "Sequence::integer on a non-integer sequence");
  return static_cast<std::int64_t>((*this)[n]);
}

std::vector<std::int64_t> Sequence::integers() const {
  require(integer_valued_, "Sequence::integers on a non-integer sequence");
  std::vector<std::int64_t> out(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(),
                 [](double v) { return static_cast<std::int64_t>(v); });
  return out;
}

double Sequence::sum() const { return simd::sum(coeffs_); }
double Sequence::sum_squares() const { return simd::dot(coeffs_, coeffs_); }

double Sequence::sum_abs() const {
  double s = 0.0;
  for (double v : coeffs_) s += std::abs(v);
  return s;
}

}  // namespace apvar
