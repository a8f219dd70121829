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

// Magnitude pruning: the threshold rule, sparsity-targeted cuts, the cubic
// gradual-sparsity schedule and the removed-mass matrix.
//
// Sparsity is always the fraction of exactly-zero entries, pre-existing zeros
// included.

#ifndef PRUNEPRIV_PRUNING_H_
#define PRUNEPRIV_PRUNING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "prunepriv/core/matrix.h"

namespace prunepriv {

// Gradual sparsity ramp from k0 to kT over n steps of dt iterations from t0.
struct PruneSchedule {
  double k0 = 0.0;
  double kT = 0.0;
  std::int64_t t0 = 0;
  std::int64_t n = 1;
  std::int64_t dt = 1;

  std::int64_t end() const { return t0 + n * dt; }
  // Throws ParameterError unless 0 <= k0 <= kT <= 1, n >= 1, dt >= 1.
  void validate() const;
};

struct PrunedLayer {
  DenseMatrix original;      // A
  DenseMatrix pruned;        // A~, entries in {0, A_ij}
  DenseMatrix removed_mass;  // A~ - A
  double threshold = 0.0;    // a
  double achieved_sparsity = 0.0;
};

// Keeps w_ij iff |w_ij| > a; ties at exactly a are pruned.
PrunedLayer threshold_prune(const DenseMatrix& w, double a);

// The cut that removes exactly round(k * w.size()) entries.
//
// `threshold` is the smallest a for which every entry with |w_ij| <= a is
// among the removed ones. When equal magnitudes straddle the cut the
// threshold alone would remove too many, so `tie_indices` then lists the
// exact (row-major) entries to zero: the lowest-magnitude entries, ties
// broken toward lower indices.
struct SparsityCut {
  double threshold = 0.0;
  std::size_t target_count = 0;
  std::vector<std::size_t> tie_indices;

  bool exact_by_threshold() const { return tie_indices.empty(); }
};

SparsityCut sparsity_to_threshold(const DenseMatrix& w, double k);

// Applies sparsity_to_threshold(w, k) and returns the resulting layer.
PrunedLayer prune_to_sparsity(const DenseMatrix& w, double k);

// k_t = kT + (k0 - kT) (1 - (t - t0) / (n dt))^3 for t in [t0, t0 + n dt].
// Throws RangeError outside that interval.
double gradual_sparsity(std::int64_t t, const PruneSchedule& s);

// Step-function view used by the trainer: k0 before t0, kT after the end,
// and the ramp value at the last grid point t0 + j dt <= t in between.
double scheduled_sparsity(std::int64_t t, const PruneSchedule& s);

// Returns pruned - original after checking pruned_ij in {0, original_ij}.
DenseMatrix removed_mass(const DenseMatrix& original, const DenseMatrix& pruned);

}  // namespace prunepriv

#endif  // PRUNEPRIV_PRUNING_H_
