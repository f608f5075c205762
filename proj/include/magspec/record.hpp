// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_RECORD_HPP
#define MAGSPEC_RECORD_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "magspec/config.hpp"
#include "magspec/conformal.hpp"
#include "magspec/lt_sums.hpp"
#include "magspec/spectral.hpp"

namespace magspec {

struct LTRecord {
  std::string variant;
  double p = 0, eps = 0, gamma = 0;
  std::optional<double> tau;
  double sum = 0, k = 0, ratio = 0;
  std::vector<double> terms;
};

struct ZeroRecord {
  int zero_count = 0;           // multiplicity-weighted count from the determinant
  int eig_in_region = 0;        // eigensolver count inside the same region
  double max_mismatch = 0;      // Hausdorff-style multiset mismatch
  double residual = 0;          // max |f| at the located zeros
  double region_x0 = 0, region_y0 = 0, region_x1 = 0, region_y1 = 0;
};

struct RectOverlay {
  double x_left = 0, x_right = 0, height = 0, level = 0;
};

/// One sweep point's results; serialized as one line of JSON. Timestamps are
/// excluded from equality so reruns are reproducible byte for byte.
struct RunRecord {
  std::string schema = "magspec.run.v1";
  std::string config_hash;
  int sweep_index = 0;
  std::map<std::string, double> sweep;
  std::string timestamp;
  std::uint64_t seed = 0;
  std::string family;
  double b = 0;
  int d = 1;
  int dim = 0;
  double v_sup = 0;
  std::string error;  // empty on success

  std::vector<std::array<double, 3>> spectrum;  // re, im, multiplicity
  std::vector<LTRecord> lt;
  std::optional<std::array<double, 4>> hansmann;  // mu0, lhs, rhs, ratio
  std::optional<bool> box_ok;
  std::optional<std::array<double, 2>> resolvent;  // sup_ratio, slope
  std::optional<std::array<double, 6>> distortion;  // inf, argmin re/im, halfline, ball, violations
  std::optional<ZeroRecord> zeros;
  std::vector<RectOverlay> rects;

  std::string to_jsonl() const;
  static RunRecord from_jsonl(const std::string& line);
  bool same_results(const RunRecord& other) const;  // ignores timestamp
};

std::vector<RunRecord> read_records(const std::string& path);
void write_records(const std::vector<RunRecord>& records, const std::string& path);

std::string csv_header(const std::vector<RunRecord>& records);
std::string csv_row(const RunRecord& r, const std::vector<RunRecord>& all);
void write_csv(const std::vector<RunRecord>& records, const std::string& path);

}  // namespace magspec

#endif  // MAGSPEC_RECORD_HPP
