/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_SUITE_HPP
#define ICEVERTEX_SUITE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace icevertex {

/// Outcome of one verification check.
struct CheckResult {
  std::string name;
  int draws = 0;            ///< random parameter sets consumed (0 when exact)
  double maxResidual = 0.0; ///< worst residual, or mismatch count for exact checks
  double tolerance = 0.0;   ///< threshold maxResidual is compared against
  bool pass = false;
  std::string note;         ///< deterministic detail (worst case, side conditions)
};

/// Shared knobs. The same config and seed give byte-identical results; the
/// split-by-label generator keeps each check's draws independent of every
/// other check.
struct SuiteConfig {
  int n = 3;           ///< largest double-row count the sweeps visit
  int m = -1;          ///< restrict to one line count; -1 sweeps every m <= n
  std::uint64_t seed = 1;
  /// Overrides keyed by check name, plus the side-condition keys
  /// "polynomiality-control", "limit-shrink" and "specialization-limit".
  std::map<std::string, double> tolerances;
};

/// Names of every individual check, sorted ("all" is not in the list).
const std::vector<std::string>& check_names();

/// Default threshold for a check name or side-condition key. Throws
/// DomainError for an unknown key.
double default_tolerance(const std::string& key);

/// Runs one check. An unknown name throws DomainError; any exception inside
/// a check is captured as pass=false with the message in `note`.
CheckResult run_check(const std::string& name, const SuiteConfig& config);

/// Runs several checks, independent ones possibly concurrently (capped by
/// worker_count()), and returns the results sorted by check name.
std::vector<CheckResult> run_suite(std::vector<std::string> names,
                                   const SuiteConfig& config);

/// Worker cap: ICEVERTEX_THREADS when set (clamped to >= 1), otherwise the
/// detected hardware concurrency, otherwise 1.
int worker_count();

}  // namespace icevertex

#endif  // ICEVERTEX_SUITE_HPP
