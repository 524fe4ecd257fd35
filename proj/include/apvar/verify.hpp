#pragma once

#include <string>
#include <vector>

#include "apvar/rational.hpp"

namespace apvar {

enum class Suite { kIdentities, kEuler, kWindows, kAll };
const char* to_string(Suite s);
Suite parse_suite(const std::string& name);

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerifyOptions {
  /// Perturbs one Ramanujan-sum value in the orthogonality check.
  bool inject_fault = false;
};

struct SuiteResult {
  std::vector<CheckResult> checks;
  bool ok() const;
};

SuiteResult run_suite(Suite suite, const VerifyOptions& opt = {});

/// Sum_{d | q} c_d(m) c_d(n) / phi(d).
Rational ramanujan_orthogonality_lhs(std::int64_t q, std::int64_t m, std::int64_t n);
/// 0 if (m,q) != (n,q), else q / phi(q/h) with h = (m,q).
Rational ramanujan_orthogonality_rhs(std::int64_t q, std::int64_t m, std::int64_t n);

}  // namespace apvar
