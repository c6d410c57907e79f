#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ordstat/distribution.hpp"

namespace ordstat {

/// One checked instance: both sides of the inequality and the verdict.
struct CheckRow {
  std::string suite;
  int index = 0;
  std::string instance;  // short description of the random configuration
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  int cases = 10;
  long replications = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Registered suites in output order: agmean, kmin-tail, min-product, simcl,
/// hlp, sub-mult, gaussian-h, partition, duality.
const std::vector<std::string>& suite_names();

/// Runs one suite on `cases` random configurations derived from `seed`.
/// gaussian-h ignores `model` (its inequalities are Gaussian statements); duality
/// uses a fixed grid instead of random cases. Throws DomainError for an
/// unknown suite name.
std::vector<CheckRow> run_suite(std::string_view name, const Distribution& model,
                                const SuiteOptions& opts);

}  // namespace ordstat
