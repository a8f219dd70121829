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

#ifndef PRUNEPRIV_NETWORK_H_
#define PRUNEPRIV_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prunepriv/core/matrix.h"
#include "prunepriv/core/rng.h"
#include "prunepriv/pruning.h"

namespace prunepriv {

struct DenseLayer {
  DenseMatrix weights;  // out x in
  DenseVector bias;     // out

  bool operator==(const DenseLayer&) const = default;
};

// Fully connected network. Hidden layers apply ReLU; the last layer emits
// raw scores.
class Mlp {
 public:
  Mlp() = default;
  // Throws ShapeError if adjacent layers do not compose.
  explicit Mlp(std::vector<DenseLayer> layers);

  // dims = {input, hidden..., output}. Weights ~ N(0, (scale/sqrt(fan_in))^2),
  // biases zero.
  static Mlp gaussian_init(std::span<const std::size_t> dims, double scale,
                           const RngStream& stream);

  std::size_t layer_count() const { return layers_.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;

  const DenseLayer& layer(std::size_t i) const { return layers_.at(i); }
  DenseLayer& layer(std::size_t i) { return layers_.at(i); }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  bool operator==(const Mlp&) const = default;

 private:
  std::vector<DenseLayer> layers_;
};

struct Example {
  DenseVector x;
  std::size_t label = 0;
};
using Dataset = std::vector<Example>;

// One activation per layer: post-ReLU for hidden layers, raw scores last.
std::vector<DenseVector> forward(const Mlp& model, const DenseVector& x);

// Output of layer `layer` (0-based), i.e. forward(model, x)[layer].
DenseVector representation(const Mlp& model, std::size_t layer,
                           const DenseVector& x);

// Index of the largest score; ties go to the lowest index.
std::size_t argmax(std::span<const double> scores);
std::size_t predict(const Mlp& model, const DenseVector& x);

// Fraction of examples predicted correctly. Empty dataset -> ParameterError.
double accuracy(const Mlp& model, const Dataset& data);

struct Gradients {
  std::vector<DenseMatrix> weights;
  std::vector<DenseVector> bias;

  static Gradients zeros_like(const Mlp& model);
};

// Softmax cross-entropy of raw scores against `label`; writes d loss / d
// scores into `grad` when non-null.
double softmax_cross_entropy(const DenseVector& scores, std::size_t label,
                             DenseVector* grad);

// Loss at one example; accumulates (adds) parameter gradients into `grads`.
double loss_and_gradients(const Mlp& model, const Example& ex,
                          Gradients* grads);

// ||representation(model, layer, x) - target||_2^2 and its gradient with
// respect to x. The ReLU derivative at 0 is taken as 0.
double representation_loss(const Mlp& model, std::size_t layer,
                           const DenseVector& x, const DenseVector& target,
                           DenseVector* grad_x);

struct TrainConfig {
  double eta = 0.05;
  std::int64_t t_train = 0;
  std::int64_t t_prune = 0;
  PruneSchedule schedule;
  std::size_t batch_size = 1;
  std::vector<std::size_t> hidden;
  std::size_t classes = 0;  // 0 -> 1 + max label in the training set
  double init_scale = 1.0;
  RngStream stream;

  // Throws ParameterError on inconsistent settings.
  void validate() const;
};

struct SparsityCheckpoint {
  std::int64_t iteration = 0;
  double target = 0.0;
  std::vector<double> layer_sparsity;
};

struct TrainHistory {
  std::vector<double> loss;  // one entry per iteration
  std::vector<SparsityCheckpoint> sparsity;
  std::optional<double> final_test_accuracy;
};

struct TrainResult {
  Mlp model;
  TrainHistory history;
};

// T_train plain SGD steps, then T_prune steps that each magnitude-prune
// every weight matrix to scheduled_sparsity(t) and take a gradient step from
// the pruned weights, then one final prune at T_end = T_train + T_prune.
// Pruned weights may regrow between in-loop prunes.
//
// Streams: init <- stream.child(0), training-stage draws <- child(1),
// pruning-stage draws <- child(2). Runs that differ only in the pruning
// stage therefore share an identical training stage.
TrainResult sgd_mag_prune_train(const Dataset& train, const TrainConfig& cfg,
                                const Dataset* test = nullptr);

// Versioned JSON model container; see README for the schema.
std::string model_to_json(const Mlp& model);
Mlp model_from_json(const std::string& text);
void save_model(const Mlp& model, const std::filesystem::path& path);
Mlp load_model(const std::filesystem::path& path);

}  // namespace prunepriv

#endif  // PRUNEPRIV_NETWORK_H_
