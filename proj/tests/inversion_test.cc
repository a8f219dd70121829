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
#include "prunepriv/inversion.h"
#include "test_util.h"

namespace prunepriv {
namespace {

// Gaussian elimination with partial pivoting; oracle for A x = t.
std::vector<double> Solve(DenseMatrix a, std::vector<double> t) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
    std::swap(t[c], t[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      t[r] -= f * t[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = t[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

Mlp LinearLayer(std::size_t side, std::uint64_t seed) {
  const std::size_t n = side * side;
  DenseMatrix a = testing::RandomMatrix(n, n, seed);
  for (double& v : a.values()) v *= 0.3 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 1.0;
  return Mlp({{a, DenseVector(n)}});
}

void ExpectMonotone(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_LE(trace[i], trace[i - 1]) << "step " << i;
  }
}

TEST(TotalVariation, HandArithmetic) {
  EXPECT_EQ(total_variation(GrayImage(5, 4, 0.3)), 0.0);
  const GrayImage img(2, 2, {0, 1, 0, 1});
  EXPECT_EQ(total_variation(img), 2.0);
  EXPECT_EQ(total_variation_smoothed(img.pixels(), 2, 2, 0.0, nullptr), 2.0);
}

TEST(TotalVariation, SmoothingBoundedBySqrtTau) {
  const DenseVector px = testing::RandomVector(30, 1, 0, 1);
  const GrayImage img = GrayImage::from_vector(px, 6, 5);
  const double tau = 1e-12;
  const double diff =
      total_variation_smoothed(px.values(), 6, 5, tau, nullptr) - total_variation(img);
  EXPECT_GE(diff, 0.0);
  EXPECT_LE(diff, 30 * std::sqrt(tau));
}

TEST(TotalVariation, GradientMatchesFiniteDifferences) {
  const DenseVector px = testing::RandomVector(20, 4, 0, 1);
  const double tau = 1e-4;
  std::vector<double> grad;
  total_variation_smoothed(px.values(), 5, 4, tau, &grad);
  const double h = 1e-6;
  for (std::size_t i = 0; i < px.dim(); ++i) {
    DenseVector p = px, q = px;
    p[i] += h;
    q[i] -= h;
    const double fd = (total_variation_smoothed(p.values(), 5, 4, tau, nullptr) -
                       total_variation_smoothed(q.values(), 5, 4, tau, nullptr)) /
                      (2 * h);
    EXPECT_NEAR(grad[i], fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Invert, FixedPointAtTheTarget) {
  const Mlp m = LinearLayer(4, 2);
  const GrayImage x0 = GrayImage::from_vector(testing::RandomVector(16, 3, 0.2, 0.8), 4, 4);
  InversionConfig cfg;
  cfg.lambda = 0.0;
  cfg.init = InversionInit::kProvided;
  cfg.init_image = x0;
  const InversionResult r = invert(m, 0, representation(m, 0, x0.flatten()), 4, 4, cfg);
  EXPECT_EQ(r.trace.front(), 0.0);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_EQ(r.image, x0);
}

TEST(Invert, RecoversLeastSquaresSolution) {
  const Mlp m = LinearLayer(4, 5);
  const DenseVector x0 = testing::RandomVector(16, 6, 0.1, 0.9);
  const DenseVector target = representation(m, 0, x0);
  const std::vector<double> oracle = Solve(m.layer(0).weights, target.data());
  InversionConfig cfg;
  cfg.lambda = 0.0;
  cfg.max_steps = 5000;
  cfg.tolerance = 0.0;
  cfg.stream = RngStream(1);
  const InversionResult r = invert(m, 0, target, 4, 4, cfg);
  const DenseVector got = r.image.flatten();
  const double rel = norms(got - DenseVector(oracle)).l2 / norms(DenseVector(oracle)).l2;
  EXPECT_LE(rel, 1e-3);
  EXPECT_LE(r.trace.back(), 1e-6);
  ExpectMonotone(r.trace);
}

TEST(Invert, OverdeterminedConsistentSystem) {
  // 24 outputs, 16 unknowns, exact target.
  const DenseMatrix a = testing::RandomMatrix(24, 16, 8);
  const Mlp m({{a, DenseVector(24)}});
  const DenseVector x0 = testing::RandomVector(16, 9, 0.1, 0.9);
  InversionConfig cfg;
  cfg.lambda = 0.0;
  cfg.max_steps = 5000;
  cfg.tolerance = 0.0;
  const InversionResult r = invert(m, 0, representation(m, 0, x0), 4, 4, cfg);
  EXPECT_LE(r.trace.back(), 1e-6);
  ExpectMonotone(r.trace);
}

TEST(Invert, ZeroNetworkLeavesOnlyTheTvTerm) {
  const Mlp zero({{DenseMatrix(8, 16), DenseVector(8)},
                  {DenseMatrix(3, 8), DenseVector(3)}});
  InversionConfig cfg;
  cfg.lambda = 0.5;
  cfg.max_steps = 2000;
  cfg.stream = RngStream(4);
  const InversionResult r = invert(zero, 0, DenseVector(8, 0.25), 4, 4, cfg);
  ExpectMonotone(r.trace);
  // Data term is the constant ||0 - 0.25||^2-type offset; all decrease is TV.
  InversionConfig init_only = cfg;
  init_only.max_steps = 0;
  const InversionResult start = invert(zero, 0, DenseVector(8, 0.25), 4, 4, init_only);
  const double data = start.trace.front() - cfg.lambda * total_variation_smoothed(
                                                start.image.pixels(), 4, 4, cfg.tau, nullptr);
  EXPECT_NEAR(r.trace.back() - data,
              cfg.lambda * total_variation_smoothed(r.image.pixels(), 4, 4, cfg.tau, nullptr),
              1e-9);
  EXPECT_LT(total_variation(r.image), 0.05 * total_variation(start.image));
}

TEST(Invert, PixelsStayInRangeAndRunsAreSeeded) {
  const Mlp m = Mlp::gaussian_init(std::vector<std::size_t>{16, 10, 4}, 1.0, RngStream(3));
  const DenseVector target = testing::RandomVector(10, 2, 0.0, 3.0);
  InversionConfig cfg;
  cfg.stream = RngStream(77);
  cfg.max_steps = 200;
  const InversionResult a = invert(m, 0, target, 4, 4, cfg);
  const InversionResult b = invert(m, 0, target, 4, 4, cfg);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.trace, b.trace);
  for (double p : a.image.pixels()) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
  ExpectMonotone(a.trace);
}

TEST(Invert, ShapeAndConfigErrors) {
  const Mlp m = LinearLayer(2, 1);
  EXPECT_THROW(invert(m, 0, DenseVector(4), 3, 3, InversionConfig{}), ShapeError);
  EXPECT_THROW(invert(m, 0, DenseVector(5), 2, 2, InversionConfig{}), ShapeError);
  InversionConfig bad;
  bad.lambda = -1;
  EXPECT_THROW(invert(m, 0, DenseVector(4), 2, 2, bad), ParameterError);
}

TEST(TraceCsv, Layout) {
  EXPECT_EQ(trace_to_csv({2.0, 0.5}), "step,objective\n0,2\n1,0.5\n");
}

}  // namespace
}  // namespace prunepriv
