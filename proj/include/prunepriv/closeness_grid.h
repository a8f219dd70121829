//
// Copyright 2026 The prunepriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Single-layer equivalence sweep: distance between the pruned layer
// g(x) = relu(A~ x) and the noise-added layer h(x) = relu(A x) + e over a
// grid of sparsities k and widths m.

#ifndef PRUNEPRIV_CLOSENESS_GRID_H_
#define PRUNEPRIV_CLOSENESS_GRID_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prunepriv/core/rng.h"
#include "prunepriv/privacy.h"

namespace prunepriv {

enum class Gs1Mode {
  kBound,  // gs1_bound(m, d, sigma_a, delta_dp), constant per cell
  kExact,  // gs1_linear_sup of each sampled A
};

struct GridConfig {
  std::vector<double> k_list{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::size_t> m_list{10, 20, 50, 100, 200, 500, 1000, 1500, 2000};
  std::size_t d = 100;
  // sigma_A = sigma_a_scale / m.
  double sigma_a_scale = 1.0;
  PrivacyBudget budget{0.5, 0.1};
  ClosenessSpec spec{0.05, 0.1};
  std::size_t trials = 50;
  Gs1Mode gs1_mode = Gs1Mode::kBound;
  CalibrationVariant variant = CalibrationVariant::kPositiveX;
  RngStream stream;
  std::size_t jobs = 1;

  void validate() const;
  double sigma_a(std::size_t m) const {
    return sigma_a_scale / static_cast<double>(m);
  }
};

struct GridCellResult {
  double k = 0.0;
  std::size_t m = 0;
  double mean_err = 0.0;
  double quantile_err = 0.0;
  bool satisfied = false;
  std::size_t trials = 0;
  double sigma = 0.0;  // calibrated noise scale (bound mode)
  double wall_seconds = 0.0;
};

// The stream a cell draws from. It depends on the (k, m) values, not on
// their list positions, so reordering either list leaves cell numbers
// unchanged.
RngStream cell_stream(const RngStream& base, double k, std::size_t m);

// Trial t uses cell.child(t): A from child(0), x from child(1), pruning
// noise from child(2).
GridCellResult run_cell(double k, std::size_t m, const GridConfig& cfg,
                        const RngStream& cell);

// One result per (k, m) in k-major order of the configured lists. Cells run
// on cfg.jobs threads; the output does not depend on cfg.jobs.
std::vector<GridCellResult> run_grid(const GridConfig& cfg);

// Smallest candidate whose mean error is <= target, running cells in the
// given (ascending) order and stopping at the first success.
std::optional<std::size_t> minimal_m(double k, double eps_ap_target,
                                     const std::vector<std::size_t>& candidates,
                                     const GridConfig& cfg);

// Same rule over already computed cells of row k.
std::optional<std::size_t> minimal_m(const std::vector<GridCellResult>& cells,
                                     double k, double eps_ap_target);

// Least-squares slope of log(mean_err) against log(m) over row k. Cells with
// zero error are skipped; nullopt if fewer than two remain.
std::optional<double> loglog_slope(const std::vector<GridCellResult>& cells,
                                   double k);

// Number of adjacent pairs (in ascending m) of row k where the error rises.
std::size_t adjacent_inversions(const std::vector<GridCellResult>& cells,
                                double k);

// Header `k,m,mean_err,q_err,satisfied,trials,seed`, 9 significant digits.
std::string grid_to_csv(const std::vector<GridCellResult>& cells,
                        std::uint64_t seed);

}  // namespace prunepriv

#endif  // PRUNEPRIV_CLOSENESS_GRID_H_
