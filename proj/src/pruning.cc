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

#include "prunepriv/pruning.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prunepriv/core/errors.h"

namespace prunepriv {
namespace {

PrunedLayer MakeLayer(const DenseMatrix& original, DenseMatrix pruned,
                      double threshold) {
  PrunedLayer layer;
  layer.removed_mass = pruned - original;
  layer.achieved_sparsity = zero_fraction(pruned);
  layer.original = original;
  layer.pruned = std::move(pruned);
  layer.threshold = threshold;
  return layer;
}

}  // namespace

void PruneSchedule::validate() const {
  if (!(k0 >= 0.0 && k0 <= kT && kT <= 1.0)) {
    throw ParameterError("PruneSchedule: need 0 <= k0 <= kT <= 1, got k0=" +
                         std::to_string(k0) + " kT=" + std::to_string(kT));
  }
  if (n < 1) throw ParameterError("PruneSchedule: n must be >= 1");
  if (dt < 1) throw ParameterError("PruneSchedule: dt must be >= 1");
}

PrunedLayer threshold_prune(const DenseMatrix& w, double a) {
  if (!(a >= 0.0) || std::isnan(a)) {
    throw ParameterError("threshold_prune: threshold must be >= 0, got " +
                         std::to_string(a));
  }
  DenseMatrix pruned = w;
  for (double& v : pruned.values()) {
    if (!(std::abs(v) > a)) v = 0.0;
  }
  return MakeLayer(w, std::move(pruned), a);
}

SparsityCut sparsity_to_threshold(const DenseMatrix& w, double k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw ParameterError("sparsity_to_threshold: k must be in [0, 1], got " +
                         std::to_string(k));
  }
  const std::size_t n = w.size();
  SparsityCut cut;
  cut.target_count = static_cast<std::size_t>(
      std::llround(k * static_cast<double>(n)));
  if (cut.target_count == 0 || n == 0) {
    cut.threshold = 0.0;  // removes only entries that are already zero
    return cut;
  }

  auto vals = w.values();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto by_magnitude = [&](std::size_t i, std::size_t j) {
    const double ai = std::abs(vals[i]);
    const double aj = std::abs(vals[j]);
    return ai < aj || (ai == aj && i < j);
  };
  const std::size_t t = cut.target_count;
  std::nth_element(order.begin(), order.begin() + (t - 1), order.end(),
                   by_magnitude);
  cut.threshold = std::abs(vals[order[t - 1]]);
  const bool straddles =
      std::any_of(order.begin() + t, order.end(), [&](std::size_t i) {
        return std::abs(vals[i]) == cut.threshold;
      });
  if (straddles) {
    // order[0, t) holds the t smallest (magnitude, index) pairs.
    cut.tie_indices.assign(order.begin(), order.begin() + t);
    std::sort(cut.tie_indices.begin(), cut.tie_indices.end());
  }
  return cut;
}

PrunedLayer prune_to_sparsity(const DenseMatrix& w, double k) {
  const SparsityCut cut = sparsity_to_threshold(w, k);
  if (cut.exact_by_threshold()) return threshold_prune(w, cut.threshold);
  DenseMatrix pruned = w;
  auto p = pruned.values();
  for (std::size_t i : cut.tie_indices) p[i] = 0.0;
  return MakeLayer(w, std::move(pruned), cut.threshold);
}

double gradual_sparsity(std::int64_t t, const PruneSchedule& s) {
  s.validate();
  if (t < s.t0 || t > s.end()) {
    throw RangeError("gradual_sparsity: t=" + std::to_string(t) +
                     " outside [" + std::to_string(s.t0) + ", " +
                     std::to_string(s.end()) + "]");
  }
  if (t == s.t0) return s.k0;
  if (t == s.end()) return s.kT;
  const double frac = 1.0 - static_cast<double>(t - s.t0) /
                                static_cast<double>(s.n * s.dt);
  return s.kT + (s.k0 - s.kT) * frac * frac * frac;
}

double scheduled_sparsity(std::int64_t t, const PruneSchedule& s) {
  s.validate();
  if (t < s.t0) return s.k0;
  if (t >= s.end()) return s.kT;
  const std::int64_t grid_t = s.t0 + ((t - s.t0) / s.dt) * s.dt;
  return gradual_sparsity(grid_t, s);
}

DenseMatrix removed_mass(const DenseMatrix& original,
                         const DenseMatrix& pruned) {
  if (!original.same_shape(pruned)) {
    throw ShapeError("removed_mass: shape mismatch");
  }
  auto o = original.values();
  auto p = pruned.values();
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (p[i] != 0.0 && p[i] != o[i]) {
      throw ConsistencyError("removed_mass: pruned entry " + std::to_string(i) +
                             " is neither 0 nor the original value");
    }
  }
  return pruned - original;
}

}  // namespace prunepriv
