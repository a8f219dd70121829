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

#include "prunepriv/network.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "prunepriv/core/errors.h"
#include "prunepriv/core/sampling.h"

namespace prunepriv {
namespace {

constexpr const char* kModelFormat = "prunepriv.mlp";
constexpr int kModelVersion = 1;

struct ForwardCache {
  std::vector<DenseVector> pre;   // z_l = W_l a_{l-1} + b_l
  std::vector<DenseVector> post;  // a_l
};

ForwardCache RunForward(const Mlp& model, const DenseVector& x,
                        std::size_t last_layer) {
  if (x.dim() != model.input_dim()) {
    throw ShapeError("forward: input dimension " + std::to_string(x.dim()) +
                     ", model expects " + std::to_string(model.input_dim()));
  }
  ForwardCache cache;
  const DenseVector* in = &x;
  for (std::size_t l = 0; l <= last_layer; ++l) {
    const DenseLayer& layer = model.layer(l);
    DenseVector z = matvec(layer.weights, *in) + layer.bias;
    const bool hidden = l + 1 < model.layer_count();
    cache.post.push_back(hidden ? relu(z) : z);
    cache.pre.push_back(std::move(z));
    in = &cache.post.back();
  }
  return cache;
}

// Backpropagates d loss / d a_{top} down to the input. Parameter gradients
// are accumulated when `grads` is non-null; returns d loss / d x.
DenseVector Backward(const Mlp& model, const DenseVector& x,
                     const ForwardCache& cache, DenseVector upstream,
                     Gradients* grads) {
  const std::size_t top = cache.post.size() - 1;
  for (std::size_t l = top + 1; l-- > 0;) {
    const bool hidden = l + 1 < model.layer_count();
    if (hidden) {
      const DenseVector& z = cache.pre[l];
      for (std::size_t i = 0; i < z.dim(); ++i) {
        if (!(z[i] > 0.0)) upstream[i] = 0.0;
      }
    }
    const DenseVector& in = l == 0 ? x : cache.post[l - 1];
    if (grads != nullptr) {
      DenseMatrix& gw = grads->weights[l];
      for (std::size_t r = 0; r < gw.rows(); ++r) {
        const double g = upstream[r];
        if (g == 0.0) continue;
        auto row = gw.row(r);
        for (std::size_t c = 0; c < gw.cols(); ++c) row[c] += g * in[c];
        grads->bias[l][r] += g;
      }
    }
    upstream = matvec_transposed(model.layer(l).weights, upstream);
  }
  return upstream;
}

void ApplyStep(Mlp& model, const Gradients& g, double step) {
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    auto w = model.layer(l).weights.values();
    auto gw = g.weights[l].values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * gw[i];
    auto b = model.layer(l).bias.values();
    auto gb = g.bias[l].values();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= step * gb[i];
  }
}

void PruneAll(Mlp& model, double k, std::vector<double>* achieved) {
  if (achieved) achieved->clear();
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    PrunedLayer p = prune_to_sparsity(model.layer(l).weights, k);
    if (achieved) achieved->push_back(p.achieved_sparsity);
    model.layer(l).weights = std::move(p.pruned);
  }
}

// One SGD step on a uniformly drawn mini-batch; returns the batch mean loss.
double SgdStep(Mlp& model, const Dataset& train, std::size_t batch,
               double eta, RandomEngine& eng) {
  Gradients g = Gradients::zeros_like(model);
  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const Example& ex = train[eng.uniform_index(train.size())];
    loss += loss_and_gradients(model, ex, &g);
  }
  ApplyStep(model, g, eta / static_cast<double>(batch));
  return loss / static_cast<double>(batch);
}

}  // namespace

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    if (layer.bias.dim() != layer.weights.rows()) {
      throw ShapeError("Mlp: layer " + std::to_string(l) +
                       " bias length does not match weight rows");
    }
    if (l > 0 && layer.weights.cols() != layers_[l - 1].weights.rows()) {
      throw ShapeError("Mlp: layer " + std::to_string(l) +
                       " input width does not match previous output");
    }
  }
}

Mlp Mlp::gaussian_init(std::span<const std::size_t> dims, double scale,
                       const RngStream& stream) {
  if (dims.size() < 2) throw ParameterError("Mlp::gaussian_init: need >= 2 dims");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("Mlp::gaussian_init: scale must be > 0");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double sigma = scale / std::sqrt(static_cast<double>(dims[l]));
    layers.push_back({sample_gaussian_matrix(dims[l + 1], dims[l], sigma,
                                             stream.child(l)),
                      DenseVector(dims[l + 1])});
  }
  return Mlp(std::move(layers));
}

std::size_t Mlp::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().weights.cols();
}

std::size_t Mlp::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().weights.rows();
}

std::vector<DenseVector> forward(const Mlp& model, const DenseVector& x) {
  if (model.layer_count() == 0) throw ShapeError("forward: empty model");
  return RunForward(model, x, model.layer_count() - 1).post;
}

DenseVector representation(const Mlp& model, std::size_t layer,
                           const DenseVector& x) {
  if (layer >= model.layer_count()) {
    throw ShapeError("representation: layer " + std::to_string(layer) +
                     " out of range");
  }
  return std::move(RunForward(model, x, layer).post.back());
}

std::size_t argmax(std::span<const double> scores) {
  if (scores.empty()) throw ShapeError("argmax: empty scores");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::size_t predict(const Mlp& model, const DenseVector& x) {
  return argmax(forward(model, x).back().values());
}

double accuracy(const Mlp& model, const Dataset& data) {
  if (data.empty()) throw ParameterError("accuracy: empty dataset");
  std::size_t correct = 0;
  for (const Example& ex : data) {
    if (predict(model, ex.x) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

Gradients Gradients::zeros_like(const Mlp& model) {
  Gradients g;
  for (const DenseLayer& layer : model.layers()) {
    g.weights.emplace_back(layer.weights.rows(), layer.weights.cols());
    g.bias.emplace_back(layer.bias.dim());
  }
  return g;
}

double softmax_cross_entropy(const DenseVector& scores, std::size_t label,
                             DenseVector* grad) {
  if (label >= scores.dim()) {
    throw ParameterError("softmax_cross_entropy: label " +
                         std::to_string(label) + " >= class count " +
                         std::to_string(scores.dim()));
  }
  const double mx = *std::max_element(scores.values().begin(),
                                      scores.values().end());
  double sum = 0.0;
  for (double s : scores.values()) sum += std::exp(s - mx);
  const double log_z = mx + std::log(sum);
  if (grad != nullptr) {
    *grad = DenseVector(scores.dim());
    for (std::size_t i = 0; i < scores.dim(); ++i) {
      (*grad)[i] = std::exp(scores[i] - log_z) - (i == label ? 1.0 : 0.0);
    }
  }
  return log_z - scores[label];
}

double loss_and_gradients(const Mlp& model, const Example& ex,
                          Gradients* grads) {
  ForwardCache cache = RunForward(model, ex.x, model.layer_count() - 1);
  DenseVector upstream;
  const double loss = softmax_cross_entropy(cache.post.back(), ex.label,
                                            grads ? &upstream : nullptr);
  if (grads != nullptr) Backward(model, ex.x, cache, std::move(upstream), grads);
  return loss;
}

double representation_loss(const Mlp& model, std::size_t layer,
                           const DenseVector& x, const DenseVector& target,
                           DenseVector* grad_x) {
  if (layer >= model.layer_count()) {
    throw ShapeError("representation_loss: layer out of range");
  }
  ForwardCache cache = RunForward(model, x, layer);
  const DenseVector diff = cache.post.back() - target;
  double loss = 0.0;
  for (double d : diff.values()) loss += d * d;
  if (grad_x != nullptr) {
    *grad_x = Backward(model, x, cache, 2.0 * diff, nullptr);
  }
  return loss;
}

void TrainConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ParameterError("TrainConfig: eta must be > 0");
  }
  if (t_train < 0 || t_prune < 0) {
    throw ParameterError("TrainConfig: iteration counts must be >= 0");
  }
  if (batch_size == 0) throw ParameterError("TrainConfig: batch_size = 0");
  if (!(init_scale > 0.0)) throw ParameterError("TrainConfig: init_scale <= 0");
  schedule.validate();
  if (t_prune > 0) {
    if (schedule.t0 < t_train || schedule.end() > t_train + t_prune) {
      throw ParameterError(
          "TrainConfig: prune schedule [" + std::to_string(schedule.t0) + ", " +
          std::to_string(schedule.end()) + "] must lie inside the pruning "
          "stage [" + std::to_string(t_train) + ", " +
          std::to_string(t_train + t_prune) + "]");
    }
  }
}

TrainResult sgd_mag_prune_train(const Dataset& train, const TrainConfig& cfg,
                                const Dataset* test) {
  cfg.validate();
  if (train.empty()) throw ParameterError("sgd_mag_prune_train: empty dataset");
  const std::size_t in_dim = train.front().x.dim();
  std::size_t classes = cfg.classes;
  for (const Example& ex : train) {
    if (ex.x.dim() != in_dim) {
      throw ShapeError("sgd_mag_prune_train: inconsistent input dimensions");
    }
    if (cfg.classes == 0) classes = std::max(classes, ex.label + 1);
    else if (ex.label >= cfg.classes) {
      throw ParameterError("sgd_mag_prune_train: label >= classes");
    }
  }
  std::vector<std::size_t> dims{in_dim};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(classes);

  TrainResult result;
  result.model = Mlp::gaussian_init(dims, cfg.init_scale, cfg.stream.child(0));
  Mlp& model = result.model;
  TrainHistory& hist = result.history;
  hist.loss.reserve(static_cast<std::size_t>(cfg.t_train + cfg.t_prune));

  RandomEngine train_eng = cfg.stream.child(1).engine();
  for (std::int64_t t = 0; t < cfg.t_train; ++t) {
    hist.loss.push_back(SgdStep(model, train, cfg.batch_size, cfg.eta, train_eng));
  }

  RandomEngine prune_eng = cfg.stream.child(2).engine();
  double last_target = -1.0;
  for (std::int64_t t = cfg.t_train; t < cfg.t_train + cfg.t_prune; ++t) {
    const double k = scheduled_sparsity(t, cfg.schedule);
    std::vector<double> achieved;
    PruneAll(model, k, &achieved);
    if (k != last_target) {
      hist.sparsity.push_back({t, k, achieved});
      last_target = k;
    }
    hist.loss.push_back(SgdStep(model, train, cfg.batch_size, cfg.eta, prune_eng));
  }

  const std::int64_t t_end = cfg.t_train + cfg.t_prune;
  const double k_end = cfg.t_prune > 0 ? scheduled_sparsity(t_end, cfg.schedule)
                                       : cfg.schedule.kT;
  std::vector<double> achieved;
  PruneAll(model, k_end, &achieved);
  hist.sparsity.push_back({t_end, k_end, achieved});

  if (test != nullptr && !test->empty()) {
    hist.final_test_accuracy = accuracy(model, *test);
  }
  return result;
}

std::string model_to_json(const Mlp& model) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["activation"] = "relu";
  j["layers"] = nlohmann::json::array();
  for (const DenseLayer& layer : model.layers()) {
    j["layers"].push_back({{"rows", layer.weights.rows()},
                           {"cols", layer.weights.cols()},
                           {"weights", layer.weights.data()},
                           {"bias", layer.bias.data()}});
  }
  return j.dump();
}

Mlp model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("model container: ") + e.what());
  }
  if (j.value("format", "") != kModelFormat) {
    throw FormatError("model container: unexpected format tag");
  }
  if (j.value("version", 0) != kModelVersion) {
    throw FormatError("model container: unsupported version");
  }
  std::vector<DenseLayer> layers;
  try {
    for (const auto& jl : j.at("layers")) {
      const auto rows = jl.at("rows").get<std::size_t>();
      const auto cols = jl.at("cols").get<std::size_t>();
      layers.push_back(
          {DenseMatrix(rows, cols, jl.at("weights").get<std::vector<double>>()),
           DenseVector(jl.at("bias").get<std::vector<double>>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model container: ") + e.what());
  }
  return Mlp(std::move(layers));
}

void save_model(const Mlp& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << model_to_json(model) << '\n';
}

Mlp load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace prunepriv
