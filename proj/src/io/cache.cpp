#include "apvar/cache.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace apvar {

namespace {

constexpr char kMagic[8] = {'A', 'P', 'V', 'S', 'I', 'E', 'V', '1'};

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;
  void add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
};

template <class T>
void hash_vec(Fnv1a& f, const std::vector<T>& v) {
  f.add(v.data(), v.size() * sizeof(T));
}

std::uint64_t checksum(const SieveTable& t) {
  Fnv1a f;
  hash_vec(f, t.lambda);
  hash_vec(f, t.mu);
  hash_vec(f, t.phi);
  hash_vec(f, t.spf);
  for (const auto& row : t.dk) hash_vec(f, row);
  return f.h;
}

template <class T>
void write_vec(std::ofstream& os, const std::vector<T>& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
bool read_vec(std::ifstream& is, std::vector<T>& v, std::size_t n) {
  v.resize(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  return static_cast<bool>(is);
}

}  // namespace

SieveCache SieveCache::from_env() {
  const char* d = std::getenv("APVAR_CACHE_DIR");
  return SieveCache(d ? std::string(d) : std::string());
}

std::string SieveCache::path(std::int64_t n, int k) const {
  return (std::filesystem::path(dir_) / ("sieve_N" + std::to_string(n) + "_k" + std::to_string(k) + ".bin")).string();
}

std::optional<SieveTable> SieveCache::load(std::int64_t n, int k) const {
  if (!enabled()) return std::nullopt;
  std::ifstream is(path(n, k), std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  std::int64_t fn = 0;
  std::int32_t fk = 0;
  std::uint64_t sum = 0;
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(&fn), sizeof fn);
  is.read(reinterpret_cast<char*>(&fk), sizeof fk);
  is.read(reinterpret_cast<char*>(&sum), sizeof sum);
  if (!is || std::memcmp(magic, kMagic, 8) != 0 || fn != n || fk != k) return std::nullopt;
  SieveTable t;
  t.n_max = n;
  t.k_max = k;
  const auto size = static_cast<std::size_t>(n + 1);
  if (!read_vec(is, t.lambda, size) || !read_vec(is, t.mu, size) || !read_vec(is, t.phi, size) ||
      !read_vec(is, t.spf, size)) {
    return std::nullopt;
  }
  t.dk.resize(static_cast<std::size_t>(k - 1));
  for (auto& row : t.dk) {
    if (!read_vec(is, row, size)) return std::nullopt;
  }
  if (checksum(t) != sum) return std::nullopt;
  return t;
}

void SieveCache::store(const SieveTable& t) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  const auto final_path = path(t.n_max, t.k_max);
  const auto tmp = final_path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) return;
    const std::int64_t n = t.n_max;
    const std::int32_t k = t.k_max;
    const std::uint64_t sum = checksum(t);
    os.write(kMagic, 8);
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&k), sizeof k);
    os.write(reinterpret_cast<const char*>(&sum), sizeof sum);
    write_vec(os, t.lambda);
    write_vec(os, t.mu);
    write_vec(os, t.phi);
    write_vec(os, t.spf);
    for (const auto& row : t.dk) write_vec(os, row);
    if (!os) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
}

SieveTable SieveCache::get(std::int64_t n, int k) const {
  if (auto t = load(n, k)) return std::move(*t);
  auto t = sieve_all(n, k);
  store(t);
  return t;
}

}  // namespace apvar
