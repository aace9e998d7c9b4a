#pragma once

#include "fracmax/corpus.hpp"
#include "fracmax/io.hpp"
#include "fracmax/verify.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fracmax {

/// Reports of one suite, grouped by inequality id in a fixed order.
struct SuiteResult {
  std::string suite;
  std::vector<std::string> order;
  std::map<std::string, std::vector<VerificationReport>> reports;
  std::vector<BoundsTable> tables;
  bool ok = true;
};

/// Overrides for suite parameters; unset fields keep the suite defaults.
struct SuiteOptions {
  double tol = 1e-10;  // self-consistency tolerance of gradient re-checks
  std::optional<double> s, alpha, p, q, delta, eps, eps_prime, t;
};

/// Checks the parameter windows that do not depend on the space.
void validate_suite_options(const std::string& suite, const SuiteOptions& options);

/// poincare, thm33, thm43, bounds, fs.
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& suite, const Corpus& corpus,
                      const SuiteOptions& options = {}, Execution mode = Execution::Reference);

/// One JSON file per inequality plus summary.csv, all under `dir`.
void write_suite(const SuiteResult& result, const std::string& dir);

/// Parameter grid of the transfer suite: (s, alpha) pairs.
const std::vector<std::pair<double, double>>& transfer_grid();

/// Seed of the random sequences drawn for a corpus entry (FNV-1a of its id).
std::uint64_t sequence_seed(const std::string& entry_id);

}  // namespace fracmax
