// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_PLOT_HPP
#define MAGSPEC_PLOT_HPP

#include <string>
#include <vector>

#include "magspec/record.hpp"

namespace magspec {

/// Deterministic SVG plots for a record stream: an eigenvalue scatter in the
/// complex plane (Landau levels, numerical-range box, and the per-level
/// rectangles overlaid) and ratio-versus-sweep line charts. Returns the
/// written file paths.
std::vector<std::string> emit_plots(const std::vector<RunRecord>& records,
                                    const std::string& stem);

}  // namespace magspec

#endif  // MAGSPEC_PLOT_HPP
