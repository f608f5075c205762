// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_CONFIG_HPP
#define MAGSPEC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "magspec/landau.hpp"
#include "magspec/lt_sums.hpp"

namespace magspec {

struct RunOptions {
  std::uint64_t seed = 0;
  int quad_order = 16;
  int sup_grid_n = 64;
  bool detect_zeros = true;
  bool hansmann = true;
  bool profile = true;
  bool distortion = true;
  double zero_tol = 1e-7;
  double delta = 0;             // rectangle margin; 0 picks gap/8
  int zero_levels = 2;          // zero search covers levels 0..zero_levels
  std::optional<double> region_y_min;  // lift the search region off the axis
  long distortion_samples = 20000;
  double distortion_radius = 0;  // 0 picks a radius past the truncated levels
};

struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

/// Full experiment description: model, truncation, potential, sum variants,
/// run options, sweep axes, and output stem.
struct ExperimentConfig {
  MagneticModel model;
  TruncationSpec trunc;
  PotentialSpec pot;
  double lt_p = 4.0;
  double lt_eps = 0.1;
  double lt_gamma = 0;
  std::optional<double> lt_tau;
  std::vector<LTVariant> lt_variants;  // empty -> family defaults
  RunOptions run;
  std::vector<SweepAxis> sweeps;
  std::string out_stem = "magspec_run";

  /// Resolves a sweep parameter path ("model.b", "lt.p",
  /// "potential.entry.1.1.amplitude_re", ...) and assigns the value.
  void set_path(const std::string& path, double value);
  /// Throws unless the path names a sweepable numeric field.
  static void check_path(const std::string& path);

  std::vector<LTVariant> effective_variants() const;
  LTConfig lt_config(LTVariant v) const;

  /// Canonical text form (sorted keys); basis of the config hash.
  std::string canonical() const;
  std::uint64_t hash() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace magspec

#endif  // MAGSPEC_CONFIG_HPP
