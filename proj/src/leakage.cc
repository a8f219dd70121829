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

#include "prunepriv/leakage.h"

#include <cmath>

#include "prunepriv/core/errors.h"
#include "prunepriv/core/parallel.h"
#include "prunepriv/core/sampling.h"
#include "prunepriv/io/synth_digits.h"

namespace prunepriv {
namespace {

// Sub-stream layout under LeakageConfig::stream.
enum Stream : std::uint64_t {
  kTrainData = 0,
  kTestData = 1,
  kTraining = 2,
  kNoiseSearch = 3,
  kAttackInit = 4,
  kReleaseNoise = 5,
};

}  // namespace

void LeakageConfig::validate() const {
  if (train_per_class == 0 || test_per_class == 0) {
    throw ParameterError("LeakageConfig: empty train or test split");
  }
  if (hidden.empty()) throw ParameterError("LeakageConfig: need a hidden layer");
  if (prune_steps < 1 || t_prune < 2 * prune_steps) {
    throw ParameterError("LeakageConfig: t_prune must be >= 2 prune_steps");
  }
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw ParameterError("LeakageConfig: sparsity outside [0, 1]");
  }
  if (images == 0) throw ParameterError("LeakageConfig: images must be >= 1");
  if (!(accuracy_tolerance > 0.0) || accuracy_repeats == 0) {
    throw ParameterError("LeakageConfig: bad accuracy matching settings");
  }
  inversion.validate();
}

DigitSplit make_digit_split(const LeakageConfig& cfg) {
  return {synth_digits(cfg.train_per_class, cfg.pixel_noise,
                       cfg.stream.child(kTrainData)),
          synth_digits(cfg.test_per_class, cfg.pixel_noise,
                       cfg.stream.child(kTestData))};
}

TrainConfig leakage_train_config(const LeakageConfig& cfg, double sparsity) {
  TrainConfig t;
  t.eta = cfg.eta;
  t.t_train = cfg.t_train;
  t.hidden = cfg.hidden;
  t.classes = 10;
  t.stream = cfg.stream.child(kTraining);
  if (sparsity < 0.0) {
    t.t_prune = 0;
    t.schedule = {0.0, 0.0, cfg.t_train, 1, 1};
    return t;
  }
  t.t_prune = cfg.t_prune;
  t.schedule.k0 = 0.0;
  t.schedule.kT = sparsity;
  t.schedule.t0 = cfg.t_train;
  t.schedule.n = cfg.prune_steps;
  t.schedule.dt = cfg.t_prune / (2 * cfg.prune_steps);
  return t;
}

DenseVector forward_from(const Mlp& model, std::size_t layer,
                         const DenseVector& rep) {
  DenseVector a = rep;
  for (std::size_t l = layer + 1; l < model.layer_count(); ++l) {
    DenseVector z = matvec(model.layer(l).weights, a) + model.layer(l).bias;
    a = l + 1 < model.layer_count() ? relu(z) : std::move(z);
  }
  return a;
}

double noisy_accuracy(const Mlp& model, const Dataset& test, double scale,
                      std::size_t repeats, const RngStream& stream) {
  if (test.empty() || repeats == 0) {
    throw ParameterError("noisy_accuracy: empty test set or zero repeats");
  }
  std::size_t correct = 0;
  for (std::size_t r = 0; r < repeats; ++r) {
    for (std::size_t i = 0; i < test.size(); ++i) {
      DenseVector rep = representation(model, 0, test[i].x);
      if (scale > 0.0) {
        rep = rep + sample_laplace_vector(0.0, scale, rep.dim(),
                                          stream.child(r, i));
      }
      if (argmax(forward_from(model, 0, rep).values()) == test[i].label) {
        ++correct;
      }
    }
  }
  return static_cast<double>(correct) /
         static_cast<double>(repeats * test.size());
}

NoiseMatch match_noise_scale(const Mlp& model, const Dataset& test,
                             double target, double tolerance,
                             std::size_t repeats, std::size_t max_iterations,
                             const RngStream& stream) {
  NoiseMatch match;
  match.target = target;
  std::size_t probe = 0;
  auto measure = [&](double scale) {
    ++match.iterations;
    return noisy_accuracy(model, test, scale, repeats, stream.child(probe++));
  };
  auto accept = [&](double scale, double acc) {
    match.scale = scale;
    match.accuracy = acc;
    if (std::abs(acc - target) <= tolerance) {
      match.converged = true;
      return true;
    }
    return false;
  };

  double lo = 0.0;
  double hi = 1.0;
  while (match.iterations < max_iterations) {
    const double acc = measure(hi);
    if (accept(hi, acc)) return match;
    if (acc < target) break;
    lo = hi;
    hi *= 2.0;
  }
  while (match.iterations < max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const double acc = measure(mid);
    if (accept(mid, acc)) return match;
    (acc > target ? lo : hi) = mid;
  }
  return match;
}

std::vector<std::size_t> spread_indices(std::size_t size, std::size_t count) {
  if (count > size) throw ParameterError("spread_indices: count > size");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < count; ++j) out.push_back(j * size / count);
  return out;
}

LeakageReport run_attacks(const Mlp& public_model, const LabeledDataset& data,
                          const std::vector<std::size_t>& indices,
                          const ReleaseFn& release,
                          const InversionConfig& inversion,
                          const RngStream& stream, std::size_t jobs) {
  std::vector<LeakageRecord> records(indices.size());
  parallel_for(indices.size(), jobs, [&](std::size_t j) {
    const std::size_t i = indices[j];
    const GrayImage& img = data.images.at(i);
    const DenseVector target = release(i, img.flatten());
    InversionConfig cfg = inversion;
    cfg.stream = stream.child(i);
    const InversionResult inv =
        invert(public_model, 0, target, img.width(), img.height(), cfg);
    records[j] = {i, ssim_normalized(inv.image, img),
                  phash_similarity(inv.image, img),
                  inference_accuracy(public_model, inv.image, data.labels[i])};
  });
  return summarize_leakage(std::move(records));
}

LeakageComparison run_leakage_comparison(const LeakageConfig& cfg) {
  cfg.validate();
  const DigitSplit split = make_digit_split(cfg);
  const Dataset train = split.train.to_examples();
  const Dataset test = split.test.to_examples();

  const Mlp baseline =
      sgd_mag_prune_train(train, leakage_train_config(cfg, -1.0)).model;
  const Mlp pruned =
      sgd_mag_prune_train(train, leakage_train_config(cfg, cfg.sparsity)).model;

  LeakageComparison out;
  out.baseline_accuracy = accuracy(baseline, test);
  out.pruned_accuracy = accuracy(pruned, test);
  out.noise = match_noise_scale(baseline, test, out.pruned_accuracy,
                                cfg.accuracy_tolerance, cfg.accuracy_repeats,
                                cfg.max_search_iterations,
                                cfg.stream.child(kNoiseSearch));
  out.indices = spread_indices(split.test.size(), cfg.images);

  const RngStream init = cfg.stream.child(kAttackInit);
  out.pruned = run_attacks(
      baseline, split.test, out.indices,
      [&](std::size_t, const DenseVector& x) {
        return representation(pruned, 0, x);
      },
      cfg.inversion, init, cfg.jobs);
  const RngStream noise = cfg.stream.child(kReleaseNoise);
  const double scale = out.noise.scale;
  out.noised = run_attacks(
      baseline, split.test, out.indices,
      [&](std::size_t i, const DenseVector& x) {
        DenseVector rep = representation(baseline, 0, x);
        if (scale > 0.0) {
          rep = rep + sample_laplace_vector(0.0, scale, rep.dim(), noise.child(i));
        }
        return rep;
      },
      cfg.inversion, init, cfg.jobs);
  return out;
}

}  // namespace prunepriv
