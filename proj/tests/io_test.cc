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
#include <fstream>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "prunepriv/core/errors.h"
#include "prunepriv/io/config.h"
#include "prunepriv/io/dataset.h"
#include "prunepriv/io/idx.h"
#include "prunepriv/io/synth_digits.h"
#include "test_util.h"

namespace prunepriv {
namespace {

void WriteBytes(const std::filesystem::path& p, const std::vector<unsigned char>& b) {
  std::ofstream f(p, std::ios::binary);
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

std::string ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

TEST(Idx, HandBuiltFixture) {
  const auto dir = testing::ScratchDir("idx_fixture");
  WriteBytes(dir / "img", {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2,
                           0, 51, 102, 255, 10, 20, 30, 40});
  WriteBytes(dir / "lbl", {0, 0, 8, 1, 0, 0, 0, 2, 7, 3});
  const LabeledDataset d = load_idx(dir / "img", dir / "lbl");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.labels, (std::vector<std::size_t>{7, 3}));
  EXPECT_EQ(d.images[0].width(), 2u);
  EXPECT_EQ(d.images[0].at(1, 0), 51 / 255.0);
  EXPECT_EQ(d.images[0].at(1, 1), 1.0);
  EXPECT_EQ(d.images[1].at(0, 1), 30 / 255.0);
}

TEST(Idx, FormatErrorsNameOffsets) {
  const auto dir = testing::ScratchDir("idx_errors");
  WriteBytes(dir / "img", {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 9});
  WriteBytes(dir / "bad_lbl", {0, 0, 8, 3, 0, 0, 0, 1, 4});
  EXPECT_NE(ErrorOf([&] { load_idx(dir / "img", dir / "bad_lbl"); }).find("offset 0"),
            std::string::npos);
  WriteBytes(dir / "two_lbl", {0, 0, 8, 1, 0, 0, 0, 2, 4, 5});
  EXPECT_NE(ErrorOf([&] { load_idx(dir / "img", dir / "two_lbl"); }).find("offset 4"),
            std::string::npos);
  WriteBytes(dir / "short_img", {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 9});
  WriteBytes(dir / "lbl", {0, 0, 8, 1, 0, 0, 0, 1, 4});
  EXPECT_NE(ErrorOf([&] { load_idx(dir / "short_img", dir / "lbl"); }).find("offset"),
            std::string::npos);
  EXPECT_THROW(load_idx(dir / "missing", dir / "lbl"), Error);
}

TEST(Idx, RoundTripOfQuantizedSyntheticDigits) {
  const auto dir = testing::ScratchDir("idx_roundtrip");
  LabeledDataset d = synth_digits(3, 0.2, RngStream(4));
  for (GrayImage& img : d.images) {
    std::vector<double> px(img.pixels().begin(), img.pixels().end());
    for (double& v : px) v = std::round(v * 255.0) / 255.0;
    img = GrayImage(img.width(), img.height(), px);
  }
  write_idx(d, dir / "i", dir / "l");
  const LabeledDataset back = load_idx(dir / "i", dir / "l");
  EXPECT_EQ(back.images, d.images);
  EXPECT_EQ(back.labels, d.labels);
}

TEST(SynthDigits, NoiselessImagesAreTemplates) {
  const LabeledDataset d = synth_digits(2, 0.0, RngStream(1));
  ASSERT_EQ(d.size(), 20u);
  EXPECT_EQ(d.class_count, 10u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d.images[i], digit_template(d.labels[i]));
    EXPECT_EQ(d.labels[i], i / 2);
  }
}

TEST(SynthDigits, DeterministicAndDistinctTemplates) {
  EXPECT_EQ(synth_digits(4, 0.1, RngStream(2)).images,
            synth_digits(4, 0.1, RngStream(2)).images);
  for (std::size_t a = 0; a < 10; ++a) {
    for (std::size_t b = a + 1; b < 10; ++b) {
      EXPECT_NE(digit_template(a), digit_template(b));
    }
  }
  for (double p : synth_digits(3, 0.5, RngStream(3)).images[7].pixels()) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(SynthDigits, MlpLearnsHeldOutSplit) {
  const Dataset train = synth_digits(60, 0.1, RngStream(5)).to_examples();
  const Dataset test = synth_digits(30, 0.1, RngStream(6)).to_examples();
  TrainConfig cfg;
  cfg.t_train = 6000;
  cfg.schedule = {0, 0, cfg.t_train, 1, 1};
  cfg.hidden = {64};
  cfg.stream = RngStream(7);
  const TrainResult r = sgd_mag_prune_train(train, cfg, &test);
  EXPECT_GE(*r.history.final_test_accuracy, 0.95);
}

TEST(DownsamplePool, Cases) {
  const GrayImage img = GrayImage::from_vector(testing::RandomVector(36, 1, 0, 1), 6, 6);
  EXPECT_EQ(downsample_pool(img, 1), img);
  EXPECT_EQ(downsample_pool(GrayImage(2, 2, {0, 1, 1, 0}), 2), GrayImage(1, 1, 0.5));
  const GrayImage pooled = downsample_pool(img, 3);
  double a = 0, b = 0;
  for (double p : img.pixels()) a += p;
  for (double p : pooled.pixels()) b += p;
  EXPECT_NEAR(a / 36.0, b / 4.0, 1e-15);
  EXPECT_THROW(downsample_pool(img, 4), ParameterError);
}

TEST(Dataset, Validation) {
  LabeledDataset d;
  d.images = {GrayImage(2, 2)};
  d.labels = {3};
  d.class_count = 2;
  EXPECT_THROW(d.validate(), ConsistencyError);
  d.labels = {1, 0};
  EXPECT_THROW(d.validate(), ConsistencyError);
}

TEST(Config, DefaultsAndStreams) {
  const ExperimentConfig cfg = parse_experiment_config(Json::object());
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_EQ(cfg.grid.trials, 50u);
  EXPECT_EQ(cfg.grid.budget.eps_dp, 0.5);
  EXPECT_EQ(cfg.leakage.accuracy_tolerance, 0.02);
  EXPECT_EQ(cfg.leakage.accuracy_repeats, 5u);
  EXPECT_EQ(cfg.grid.stream, RngStream(0).child(2));
  EXPECT_EQ(cfg.leakage.stream, RngStream(0).child(4));
}

TEST(Config, OverridesAndEnums) {
  Json root = Json::object();
  apply_override(root, "seed=9");
  apply_override(root, "grid.m_list=[10,20]");
  apply_override(root, "grid.gs1_mode=exact");
  apply_override(root, "leakage.inversion.init=mid-gray");
  const ExperimentConfig cfg = parse_experiment_config(root);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.grid.m_list, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(cfg.grid.gs1_mode, Gs1Mode::kExact);
  EXPECT_EQ(cfg.leakage.inversion.init, InversionInit::kMidGray);
  EXPECT_THROW(apply_override(root, "novalue"), UsageError);
}

TEST(Config, SchemaViolationsAreUsageErrors) {
  for (const char* text : {R"({"bogus": 1})", R"({"grid": {"d": "wide"}})",
                           R"({"grid": {"gs1_mode": "tight"}})",
                           R"({"leakage": {"inversion": {"lam": 1}}})",
                           R"({"grid": {"trials": 0}})", R"({"grid": 3})"}) {
    EXPECT_THROW(parse_experiment_config(Json::parse(text)), UsageError) << text;
  }
}

}  // namespace
}  // namespace prunepriv
