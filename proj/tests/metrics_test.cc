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

#include "json.hpp"
#include "prunepriv/core/errors.h"
#include "prunepriv/image.h"
#include "prunepriv/metrics.h"
#include "test_util.h"

namespace prunepriv {
namespace {

GrayImage RandomImage(std::size_t w, std::size_t h, std::uint64_t seed) {
  return GrayImage::from_vector(testing::RandomVector(w * h, seed, 0.0, 1.0), w, h);
}

GrayImage Structured(std::size_t side) {
  GrayImage img(side, side);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const double ramp = static_cast<double>(x) / static_cast<double>(side - 1);
      const bool block = (x / 4 + y / 4) % 2 == 0;
      img.set(x, y, 0.6 * ramp + (block ? 0.4 : 0.0));
    }
  }
  return img;
}

// Direct per-window SSIM with population moments and uniform windows.
double SsimOracle(const GrayImage& x, const GrayImage& y) {
  const double c1 = 1e-4, c2 = 9e-4;
  const std::size_t side = std::min<std::size_t>({7, x.width(), x.height()});
  const double n = static_cast<double>(side * side);
  double total = 0.0;
  int count = 0;
  for (std::size_t j = 0; j + side <= x.height(); ++j) {
    for (std::size_t i = 0; i + side <= x.width(); ++i) {
      double mx = 0, my = 0;
      for (std::size_t b = 0; b < side; ++b) {
        for (std::size_t a = 0; a < side; ++a) {
          mx += x.at(i + a, j + b);
          my += y.at(i + a, j + b);
        }
      }
      mx /= n;
      my /= n;
      double vx = 0, vy = 0, cxy = 0;
      for (std::size_t b = 0; b < side; ++b) {
        for (std::size_t a = 0; a < side; ++a) {
          const double dx = x.at(i + a, j + b) - mx;
          const double dy = y.at(i + a, j + b) - my;
          vx += dx * dx;
          vy += dy * dy;
          cxy += dx * dy;
        }
      }
      vx /= n;
      vy /= n;
      cxy /= n;
      total += (2 * mx * my + c1) * (2 * cxy + c2) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return (total / count + 1.0) / 2.0;
}

TEST(Ssim, SelfSimilarityIsOne) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const GrayImage img = RandomImage(9, 11, s);
    EXPECT_EQ(ssim_normalized(img, img), 1.0);
  }
}

TEST(Ssim, ConstantBlackVersusWhite) {
  const double c1 = 1e-4;
  const double v = ssim_normalized(GrayImage(8, 8, 0.0), GrayImage(8, 8, 1.0));
  EXPECT_NEAR(v, (c1 / (1 + c1) + 1) / 2, 1e-12);
  EXPECT_NEAR(v, 0.5001, 1e-4);
}

TEST(Ssim, MatchesBruteForceWindows) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const GrayImage a = RandomImage(16, 16, 2 * s);
    const GrayImage b = RandomImage(16, 16, 2 * s + 1);
    EXPECT_NEAR(ssim_normalized(a, b), SsimOracle(a, b), 1e-10);
  }
  const GrayImage a = RandomImage(5, 3, 1), b = RandomImage(5, 3, 2);
  EXPECT_NEAR(ssim_normalized(a, b), SsimOracle(a, b), 1e-10);
}

TEST(Ssim, ExactlySymmetric) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const GrayImage a = RandomImage(8, 8, s), b = RandomImage(8, 8, s + 500);
    EXPECT_EQ(ssim_normalized(a, b), ssim_normalized(b, a));
  }
}

TEST(Ssim, ShapeMismatch) {
  EXPECT_THROW(ssim_normalized(GrayImage(4, 4), GrayImage(4, 5)), ShapeError);
}

TEST(Phash, SelfSimilarityAndDeterminism) {
  const GrayImage img = Structured(16);
  EXPECT_EQ(phash(img), phash(img));
  EXPECT_EQ(phash_similarity(img, img), 1.0);
}

TEST(Phash, NegativeImageIsDissimilar) {
  const GrayImage img = Structured(16);
  GrayImage neg(16, 16);
  for (std::size_t y = 0; y < 16; ++y) {
    for (std::size_t x = 0; x < 16; ++x) neg.set(x, y, 1.0 - img.at(x, y));
  }
  EXPECT_LE(phash_similarity(img, neg), 0.6);
}

TEST(Phash, ConstantImageSetsDcBit) {
  // AC coefficients are rounding noise around 0; the DC term dominates.
  EXPECT_EQ(phash(GrayImage(8, 8, 0.7)) & 1u, 1u);
  EXPECT_EQ(phash(GrayImage(32, 32, 0.2)) & 1u, 1u);
}

TEST(ResizeBilinear, CornersAndIdentity) {
  const GrayImage img = RandomImage(5, 4, 3);
  EXPECT_EQ(resize_bilinear(img, 5, 4), img);
  const GrayImage big = resize_bilinear(img, 9, 7);
  EXPECT_EQ(big.at(0, 0), img.at(0, 0));
  EXPECT_EQ(big.at(8, 6), img.at(4, 3));
  EXPECT_DOUBLE_EQ(big.at(1, 0), 0.5 * (img.at(0, 0) + img.at(1, 0)));
}

TEST(Metrics, RangeContainmentFuzz) {
  RandomEngine eng(1);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t w = 1 + eng.uniform_index(10), h = 1 + eng.uniform_index(10);
    const GrayImage a = RandomImage(w, h, 3 * t), b = RandomImage(w, h, 3 * t + 1);
    const double s = ssim_normalized(a, b);
    const double p = phash_similarity(a, b);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
    ASSERT_EQ(p, phash_similarity(b, a));
  }
}

TEST(Metrics, InvariantUnderPgmRoundTrip) {
  const auto dir = testing::ScratchDir("metrics_pgm");
  GrayImage a(12, 10), b(12, 10);
  RandomEngine eng(5);
  for (std::size_t y = 0; y < 10; ++y) {
    for (std::size_t x = 0; x < 12; ++x) {
      a.set(x, y, static_cast<double>(eng.uniform_index(256)) / 255.0);
      b.set(x, y, static_cast<double>(eng.uniform_index(256)) / 255.0);
    }
  }
  write_pgm(a, dir / "a.pgm");
  write_pgm(b, dir / "b.pgm");
  const GrayImage ra = read_pgm(dir / "a.pgm"), rb = read_pgm(dir / "b.pgm");
  EXPECT_EQ(ssim_normalized(ra, rb), ssim_normalized(a, b));
  EXPECT_EQ(phash_similarity(ra, rb), phash_similarity(a, b));
}

TEST(InferenceAccuracy, TieRuleAndConsistencyWithAccuracy) {
  const Mlp constant({{DenseMatrix(3, 4), DenseVector(3, 0.2)}});
  EXPECT_EQ(inference_accuracy(constant, GrayImage(2, 2, 0.5), 0), 1);
  EXPECT_EQ(inference_accuracy(constant, GrayImage(2, 2, 0.5), 2), 0);

  const Mlp m = Mlp::gaussian_init(std::vector<std::size_t>{4, 6, 3}, 1.0, RngStream(9));
  Dataset data;
  int hits = 0;
  RandomEngine eng(2);
  for (int i = 0; i < 60; ++i) {
    const GrayImage img = RandomImage(2, 2, 100 + i);
    const std::size_t label = eng.uniform_index(3);
    data.push_back({img.flatten(), label});
    hits += inference_accuracy(m, img, label);
  }
  EXPECT_EQ(hits / 60.0, accuracy(m, data));
  // An input the model classifies correctly scores 1.
  EXPECT_EQ(inference_accuracy(m, GrayImage::from_vector(data[0].x, 2, 2),
                               predict(m, data[0].x)),
            1);
}

TEST(LeakageReport, SummaryAndSerialization) {
  const LeakageReport r = summarize_leakage(
      {{0, 0.5, 0.75, 1}, {3, 0.25, 1.0, 0}});
  EXPECT_EQ(r.ssim.mean, 0.375);
  EXPECT_EQ(r.ssim.min, 0.25);
  EXPECT_EQ(r.phash.max, 1.0);
  EXPECT_EQ(r.infe.mean, 0.5);
  EXPECT_EQ(leakage_to_csv(r), "image_id,ssim,phash,infe\n0,0.5,0.75,1\n3,0.25,1,0\n");
  const auto j = nlohmann::json::parse(leakage_to_json(r));
  EXPECT_EQ(j["count"], 2);
  EXPECT_EQ(j["ssim"]["mean"], 0.375);
  EXPECT_THROW(summarize_leakage({}), ParameterError);
}

}  // namespace
}  // namespace prunepriv
