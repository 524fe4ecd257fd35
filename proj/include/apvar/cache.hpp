#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "apvar/arith.hpp"

namespace apvar {

/// Binary sieve-table cache under $APVAR_CACHE_DIR, keyed by (N, k) and
/// guarded by an FNV-1a checksum of the payload. Corrupt or mismatched
/// files are ignored and rebuilt.
class SieveCache {
 public:
  /// Directory from APVAR_CACHE_DIR; disabled when unset or empty.
  static SieveCache from_env();
  explicit SieveCache(std::string dir) : dir_(std::move(dir)) {}

  bool enabled() const { return !dir_.empty(); }
  std::string path(std::int64_t n, int k) const;
  std::optional<SieveTable> load(std::int64_t n, int k) const;
  void store(const SieveTable& t) const;
  /// load, or sieve_all and store.
  SieveTable get(std::int64_t n, int k) const;

 private:
  std::string dir_;
};

}  // namespace apvar
