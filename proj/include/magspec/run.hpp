// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_RUN_HPP
#define MAGSPEC_RUN_HPP

#include <string>
#include <vector>

#include "magspec/config.hpp"
#include "magspec/record.hpp"

namespace magspec {

/// Evaluates one sweep point (pure given config and index); any module error
/// is caught and recorded in the error field.
RunRecord run_point(const ExperimentConfig& cfg, int sweep_index);

/// Cartesian sweep over the configured axes, executed by a bounded worker
/// pool (MAGSPEC_WORKERS, default min(hardware, 8)); records are ordered by
/// sweep index regardless of completion order.
std::vector<RunRecord> run_sweep(const ExperimentConfig& cfg);

/// run_sweep plus the .jsonl record stream and the .csv scalar projection.
struct RunOutput {
  std::vector<RunRecord> records;
  std::string jsonl_path;
  std::string csv_path;
};
RunOutput run(const ExperimentConfig& cfg);

/// Offline invariant revalidation of a record stream. Returns the failure
/// messages (empty means everything checked out).
std::vector<std::string> check_records(const std::vector<RunRecord>& records);

/// Empirical-constant table for a record stream (text, one row per point).
std::string sweep_report(const std::vector<RunRecord>& records);

}  // namespace magspec

#endif  // MAGSPEC_RUN_HPP
