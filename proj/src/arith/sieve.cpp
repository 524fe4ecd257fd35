#include <cmath>
#include <limits>

#include "apvar/arith.hpp"

namespace apvar {

namespace {

constexpr std::int64_t kSegment = std::int64_t{1} << 22;

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial_u64 overflow");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<std::uint32_t> primes_up_to(std::int64_t n) {
  std::vector<std::uint32_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::int64_t j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

Factorization factorize(std::int64_t n) {
  require(n >= 1, "factorize: n must be positive");
  Factorization f;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

int moebius(std::int64_t n) {
  int m = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

bool is_squarefree(std::int64_t n) {
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return false;
  }
  return true;
}

std::uint64_t divisor_k(int k, std::int64_t n) {
  require(k >= 1, "divisor_k: k must be >= 1");
  std::uint64_t r = 1;
  for (auto [p, e] : factorize(n)) r *= binomial_u64(static_cast<std::uint64_t>(e + k - 1), k - 1);
  return r;
}

std::uint64_t SieveTable::divisor_k(int j, std::int64_t n) const {
  if (j == 1) return 1;
  require(j >= 2 && j <= k_max, "SieveTable::divisor_k: j outside sieved range");
  return dk[static_cast<std::size_t>(j - 2)][static_cast<std::size_t>(n)];
}

Sequence SieveTable::lambda_sequence() const {
  return Sequence("lambda", std::vector<double>(lambda.begin() + 1, lambda.end()), false);
}

Sequence SieveTable::divisor_sequence(int j) const {
  std::vector<double> v(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    v[static_cast<std::size_t>(n - 1)] = static_cast<double>(divisor_k(j, n));
  }
  return Sequence("d" + std::to_string(j), std::move(v), true);
}

SieveTable sieve_all(std::int64_t n_max, int k_max) {
  require(n_max >= 1, "sieve_all: N must be >= 1");
  require(k_max >= 2, "sieve_all: k must be >= 2");
  if (n_max > limits().max_sieve_n || n_max >= (std::int64_t{1} << 32)) {
    throw CapacityError("sieve_all: N=" + std::to_string(n_max) +
                        " exceeds the configured sieve budget " +
                        std::to_string(limits().max_sieve_n));
  }

  SieveTable t;
  t.n_max = n_max;
  t.k_max = k_max;
  const auto size = static_cast<std::size_t>(n_max + 1);
  t.lambda.assign(size, 0.0);
  t.mu.assign(size, 0);
  t.phi.assign(size, 0);
  t.spf.assign(size, 0);
  t.dk.assign(static_cast<std::size_t>(k_max - 1), std::vector<std::uint64_t>(size, 0));

  // d_j(p^e) = C(e + j - 1, j - 1) for e < 64.
  std::vector<std::vector<std::uint64_t>> prime_power_dk(static_cast<std::size_t>(k_max - 1));
  for (int j = 2; j <= k_max; ++j) {
    auto& row = prime_power_dk[static_cast<std::size_t>(j - 2)];
    for (int e = 0; e < 64; ++e) row.push_back(binomial_u64(static_cast<std::uint64_t>(e + j - 1), j - 1));
  }

  const auto base_primes = primes_up_to(isqrt(n_max));
  const std::int64_t segments = (n_max + kSegment - 1) / kSegment;

  parallel_for(0, segments, [&](std::int64_t s) {
    const std::int64_t lo = 1 + s * kSegment;
    const std::int64_t hi = std::min(n_max + 1, lo + kSegment);
    const auto len = static_cast<std::size_t>(hi - lo);
    std::vector<std::uint64_t> rem(len);
    std::vector<std::uint8_t> omega(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      const auto n = static_cast<std::size_t>(lo) + i;
      rem[i] = n;
      t.mu[n] = 1;
      t.phi[n] = 1;
      for (auto& row : t.dk) row[n] = 1;
    }
    for (std::uint32_t p : base_primes) {
      std::int64_t first = ((lo + p - 1) / p) * p;
      for (std::int64_t m = first; m < hi; m += p) {
        const auto i = static_cast<std::size_t>(m - lo);
        const auto n = static_cast<std::size_t>(m);
        int e = 0;
        std::uint64_t pe = 1;
        while (rem[i] % p == 0) {
          rem[i] /= p;
          pe *= p;
          ++e;
        }
        t.mu[n] = static_cast<std::int8_t>(e == 1 ? -t.mu[n] : 0);
        t.phi[n] = static_cast<std::uint32_t>(t.phi[n] * (pe / p) * (p - 1));
        for (int j = 2; j <= k_max; ++j) {
          t.dk[static_cast<std::size_t>(j - 2)][n] *=
              prime_power_dk[static_cast<std::size_t>(j - 2)][static_cast<std::size_t>(e)];
        }
        if (t.spf[n] == 0) t.spf[n] = p;
        ++omega[i];
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      const auto n = static_cast<std::size_t>(lo) + i;
      if (rem[i] > 1) {
        const std::uint64_t p = rem[i];
        t.mu[n] = static_cast<std::int8_t>(-t.mu[n]);
        t.phi[n] = static_cast<std::uint32_t>(t.phi[n] * (p - 1));
        for (int j = 2; j <= k_max; ++j) t.dk[static_cast<std::size_t>(j - 2)][n] *= static_cast<std::uint64_t>(j);
        if (t.spf[n] == 0) t.spf[n] = static_cast<std::uint32_t>(p);
        ++omega[i];
      }
      if (n == 1) t.spf[n] = 1;
      if (omega[i] == 1) t.lambda[n] = std::log(static_cast<double>(t.spf[n]));
    }
  });
  return t;
}

}  // namespace apvar
