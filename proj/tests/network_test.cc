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


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "prunepriv/core/errors.h"
#include "prunepriv/network.h"
#include "prunepriv/pruning.h"
#include "test_util.h"

namespace prunepriv {
namespace {

Mlp ToyNet(std::uint64_t seed) {
  const std::vector<std::size_t> dims{5, 4, 3};
  Mlp m = Mlp::gaussian_init(dims, 1.0, RngStream(seed));
  RandomEngine eng(seed + 1);
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    for (double& b : m.layer(l).bias.values()) b = 0.3 * eng.normal();
  }
  return m;
}

double Loss(const Mlp& m, const Example& ex) {
  return softmax_cross_entropy(forward(m, ex.x).back(), ex.label, nullptr);
}

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

TEST(Forward, ZeroNetworkGivesZeroActivations) {
  const Mlp m({{DenseMatrix(3, 2), DenseVector(3)},
               {DenseMatrix(2, 3), DenseVector(2)}});
  for (const DenseVector& a : forward(m, DenseVector({0.4, -2.0}))) {
    for (double v : a.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Forward, HandArithmetic) {
  const Mlp m({{DenseMatrix{{1, -1}}, DenseVector({0.5})}});
  EXPECT_EQ(forward(m, DenseVector({1, 0})).back(), DenseVector({1.5}));
  EXPECT_EQ(representation(m, 0, DenseVector({1, 0})), DenseVector({1.5}));
}

TEST(Forward, HiddenLayersUseRelu) {
  const Mlp m({{DenseMatrix{{1}, {-1}}, DenseVector({0, 0})},
               {DenseMatrix{{1, 1}}, DenseVector({0})}});
  EXPECT_EQ(representation(m, 0, DenseVector({2})), DenseVector({2, 0}));
  EXPECT_EQ(forward(m, DenseVector({-3})).back(), DenseVector({3}));
}

TEST(Mlp, RejectsNonComposingLayers) {
  EXPECT_THROW(Mlp({{DenseMatrix(3, 2), DenseVector(3)},
                    {DenseMatrix(2, 4), DenseVector(2)}}),
               ShapeError);
}

TEST(Gradients, MatchCentralFiniteDifferences) {
  const Mlp m = ToyNet(3);
  const Example ex{testing::RandomVector(5, 9), 2};
  Gradients g = Gradients::zeros_like(m);
  loss_and_gradients(m, ex, &g);
  const double h = 1e-6;
  for (std::size_t l = 0; l < m.layer_count(); ++l) {
    for (std::size_t i = 0; i < m.layer(l).weights.size(); ++i) {
      Mlp plus = m, minus = m;
      plus.layer(l).weights.values()[i] += h;
      minus.layer(l).weights.values()[i] -= h;
      const double fd = (Loss(plus, ex) - Loss(minus, ex)) / (2 * h);
      EXPECT_LT(RelErr(g.weights[l].values()[i], fd), 1e-5)
          << "layer " << l << " weight " << i;
    }
    for (std::size_t i = 0; i < m.layer(l).bias.dim(); ++i) {
      Mlp plus = m, minus = m;
      plus.layer(l).bias[i] += h;
      minus.layer(l).bias[i] -= h;
      const double fd = (Loss(plus, ex) - Loss(minus, ex)) / (2 * h);
      EXPECT_LT(RelErr(g.bias[l][i], fd), 1e-5);
    }
  }
}

TEST(Gradients, RepresentationLossInputGradient) {
  const Mlp m = ToyNet(5);
  const DenseVector x = testing::RandomVector(5, 2, 0.0, 1.0);
  const DenseVector target = testing::RandomVector(4, 3, 0.0, 1.0);
  DenseVector grad;
  representation_loss(m, 0, x, target, &grad);
  const double h = 1e-6;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    DenseVector p = x, q = x;
    p[j] += h;
    q[j] -= h;
    const double fd = (representation_loss(m, 0, p, target, nullptr) -
                       representation_loss(m, 0, q, target, nullptr)) /
                      (2 * h);
    EXPECT_LT(RelErr(grad[j], fd), 1e-5);
  }
}

TEST(Predict, ArgmaxAndTieRule) {
  EXPECT_EQ(argmax(std::vector<double>{0.1, 0.9, 0.3}), 1u);
  EXPECT_EQ(argmax(std::vector<double>{0.5, 0.5}), 0u);
  const Mlp constant({{DenseMatrix(3, 2), DenseVector({1, 1, 1})}});
  EXPECT_EQ(predict(constant, DenseVector({0.3, 0.7})), 0u);
}

TEST(Accuracy, TrivialCases) {
  // Identity network on one-hot inputs predicts the hot coordinate.
  const Mlp id({{DenseMatrix{{1, 0}, {0, 1}}, DenseVector(2)}});
  const Dataset all{{DenseVector({1, 0}), 0}, {DenseVector({0, 1}), 1}};
  EXPECT_EQ(accuracy(id, all), 1.0);
  EXPECT_EQ(accuracy(id, {{DenseVector({1, 0}), 1}}), 0.0);
}

TEST(Accuracy, MatchesCountingOracle) {
  const Mlp m = ToyNet(8);
  Dataset data;
  RandomEngine eng(4);
  for (int i = 0; i < 100; ++i) {
    data.push_back({testing::RandomVector(5, 50 + i), eng.uniform_index(3)});
  }
  int hits = 0;
  for (const Example& ex : data) {
    const DenseVector s = forward(m, ex.x).back();
    std::size_t best = 0;
    for (std::size_t c = 1; c < s.dim(); ++c) {
      if (s[c] > s[best]) best = c;
    }
    hits += best == ex.label ? 1 : 0;
  }
  EXPECT_EQ(accuracy(m, data), hits / 100.0);
}

TrainConfig PlainConfig(std::int64_t iters) {
  TrainConfig cfg;
  cfg.eta = 0.05;
  cfg.t_train = iters;
  cfg.t_prune = 0;
  cfg.schedule = {0.0, 0.0, iters, 1, 1};
  cfg.hidden = {16};
  cfg.stream = RngStream(12);
  return cfg;
}

TEST(SgdMagPruneTrain, PlainSgdReducesLossAndFitsBlobs) {
  const Dataset data = testing::Blobs(3, 40, 6, 1);
  const TrainResult r = sgd_mag_prune_train(data, PlainConfig(2000));
  const auto& loss = r.history.loss;
  ASSERT_EQ(loss.size(), 2000u);
  const std::size_t tenth = loss.size() / 10;
  const std::vector<double> first(loss.begin(), loss.begin() + tenth);
  const std::vector<double> last(loss.end() - tenth, loss.end());
  EXPECT_LT(testing::Mean(last), testing::Mean(first));
  EXPECT_GE(accuracy(r.model, data), 0.95);
}

TrainConfig PruningConfig() {
  TrainConfig cfg = PlainConfig(800);
  cfg.t_prune = 400;
  cfg.schedule = {0.0, 0.5, 800, 5, 40};
  return cfg;
}

TEST(SgdMagPruneTrain, FinalSparsityEqualsTarget) {
  const Dataset data = testing::Blobs(3, 30, 6, 2);
  const TrainResult r = sgd_mag_prune_train(data, PruningConfig());
  for (const DenseLayer& l : r.model.layers()) {
    EXPECT_NEAR(zero_fraction(l.weights), 0.5, 1.0 / l.weights.size());
  }
}

TEST(SgdMagPruneTrain, CheckpointsMeetSchedule) {
  const Dataset data = testing::Blobs(3, 30, 6, 2);
  const TrainConfig cfg = PruningConfig();
  const TrainResult r = sgd_mag_prune_train(data, cfg);
  ASSERT_FALSE(r.history.sparsity.empty());
  for (const SparsityCheckpoint& c : r.history.sparsity) {
    const double k = scheduled_sparsity(c.iteration, cfg.schedule);
    EXPECT_EQ(c.target, k);
    for (std::size_t l = 0; l < c.layer_sparsity.size(); ++l) {
      const double cells = static_cast<double>(r.model.layer(l).weights.size());
      EXPECT_GE(c.layer_sparsity[l], k - 1.0 / cells);
    }
  }
  EXPECT_EQ(r.history.sparsity.back().iteration, cfg.t_train + cfg.t_prune);
}

TEST(SgdMagPruneTrain, BitReproducible) {
  const Dataset data = testing::Blobs(3, 20, 6, 3);
  const TrainResult a = sgd_mag_prune_train(data, PruningConfig());
  const TrainResult b = sgd_mag_prune_train(data, PruningConfig());
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.history.loss, b.history.loss);
}

TEST(SgdMagPruneTrain, RejectsScheduleOutsidePruningStage) {
  TrainConfig cfg = PruningConfig();
  cfg.schedule.dt = 1000;
  EXPECT_THROW(cfg.validate(), ParameterError);
}

TEST(ModelContainer, RoundTripIsExact) {
  const Mlp m = ToyNet(21);
  EXPECT_EQ(model_from_json(model_to_json(m)), m);
  const auto dir = testing::ScratchDir("model");
  save_model(m, dir / "m.json");
  EXPECT_EQ(load_model(dir / "m.json"), m);
  EXPECT_THROW(model_from_json("{\"format\":\"other\"}"), FormatError);
  EXPECT_THROW(model_from_json("not json"), FormatError);
}

}  // namespace
}  // namespace prunepriv
