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

// Leakage comparison between a pruned representation and a noise-added
// one at matched test accuracy.
//
// Threat model: the trained, unpruned network is public. The defender
// releases either the first hidden representation of the pruned network
// or the public representation plus Laplace noise. The attacker inverts
// the released vector through the public first layer.

#ifndef PRUNEPRIV_LEAKAGE_H_
#define PRUNEPRIV_LEAKAGE_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "prunepriv/core/rng.h"
#include "prunepriv/inversion.h"
#include "prunepriv/io/dataset.h"
#include "prunepriv/metrics.h"
#include "prunepriv/network.h"

namespace prunepriv {

struct LeakageConfig {
  std::size_t train_per_class = 60;
  std::size_t test_per_class = 30;
  double pixel_noise = 0.1;
  std::vector<std::size_t> hidden{128};
  double eta = 0.05;
  std::int64_t t_train = 6000;
  std::int64_t t_prune = 3000;
  std::int64_t prune_steps = 10;  // schedule n; dt = t_prune / (2 n)
  double sparsity = 0.5;

  std::size_t images = 20;
  InversionConfig inversion;

  double accuracy_tolerance = 0.02;
  std::size_t accuracy_repeats = 5;
  std::size_t max_search_iterations = 40;

  RngStream stream;
  std::size_t jobs = 1;

  void validate() const;
};

struct DigitSplit {
  LabeledDataset train;
  LabeledDataset test;
};

// train <- stream.child(0), test <- stream.child(1).
DigitSplit make_digit_split(const LeakageConfig& cfg);

// Trainer settings for kT = `sparsity`; the training stage depends only on
// cfg.stream, so every sparsity shares the same pre-pruning weights.
// sparsity < 0 selects the unpruned baseline (no pruning stage).
TrainConfig leakage_train_config(const LeakageConfig& cfg, double sparsity);

// Scores of the layers after `layer`, fed with `rep` as the output of
// `layer`.
DenseVector forward_from(const Mlp& model, std::size_t layer,
                         const DenseVector& rep);

// Test accuracy with Lap(0, scale) noise added to the first hidden
// representation, averaged over `repeats` noise draws (draw r uses
// stream.child(r), example i within it child(i)).
double noisy_accuracy(const Mlp& model, const Dataset& test, double scale,
                      std::size_t repeats, const RngStream& stream);

struct NoiseMatch {
  double scale = 0.0;
  double accuracy = 0.0;
  double target = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Bisection on the noise scale until noisy_accuracy is within `tolerance`
// of `target`. The upper end is found by doubling from 1. Probe j draws
// from stream.child(j).
NoiseMatch match_noise_scale(const Mlp& model, const Dataset& test,
                             double target, double tolerance,
                             std::size_t repeats, std::size_t max_iterations,
                             const RngStream& stream);

// Released representation for test image i.
using ReleaseFn = std::function<DenseVector(std::size_t i, const DenseVector& x)>;

// Inverts release(i, x_i) through the public first layer for each image
// index, scoring SSIM / pHash against the original and INFE against the
// public model. Attack i uses cfg.inversion with stream child(i).
LeakageReport run_attacks(const Mlp& public_model, const LabeledDataset& data,
                          const std::vector<std::size_t>& indices,
                          const ReleaseFn& release,
                          const InversionConfig& inversion,
                          const RngStream& stream, std::size_t jobs);

// `count` indices spread evenly over [0, size).
std::vector<std::size_t> spread_indices(std::size_t size, std::size_t count);

struct LeakageComparison {
  double baseline_accuracy = 0.0;
  double pruned_accuracy = 0.0;
  NoiseMatch noise;
  LeakageReport pruned;
  LeakageReport noised;
  std::vector<std::size_t> indices;
};

// The full protocol at cfg.sparsity: train baseline and pruned models,
// match the noise scale to the pruned accuracy, attack both releases.
LeakageComparison run_leakage_comparison(const LeakageConfig& cfg);

}  // namespace prunepriv

#endif  // PRUNEPRIV_LEAKAGE_H_
