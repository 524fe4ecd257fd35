#include <cmath>

#include "apvar/circle.hpp"
#include "apvar/simd/kernels.hpp"

namespace apvar {

std::complex<double> eval_exp_sum(const Sequence& seq, double alpha) {
  const double frac = alpha - std::floor(alpha);
  return simd::exp_sum(seq.values(), frac);
}

std::int64_t default_grid_size(std::int64_t n) {
  std::int64_t t = 1;
  while (t < 16 * n) t <<= 1;
  return t;
}

}  // namespace apvar
