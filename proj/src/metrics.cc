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

#include "prunepriv/metrics.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "prunepriv/core/errors.h"
#include "prunepriv/core/format.h"

namespace prunepriv {
namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr std::size_t kHashSide = 32;
constexpr std::size_t kBlock = 8;

// (w + 1) x (h + 1) inclusive prefix sums of f(x_p, y_p).
class SummedArea {
 public:
  template <typename F>
  SummedArea(std::size_t w, std::size_t h, F f)
      : stride_(w + 1), table_((w + 1) * (h + 1), 0.0) {
    for (std::size_t y = 0; y < h; ++y) {
      double row = 0.0;
      for (std::size_t x = 0; x < w; ++x) {
        row += f(x, y);
        table_[(y + 1) * stride_ + x + 1] = table_[y * stride_ + x + 1] + row;
      }
    }
  }

  double box(std::size_t x, std::size_t y, std::size_t side) const {
    const std::size_t x1 = x + side, y1 = y + side;
    return table_[y1 * stride_ + x1] - table_[y * stride_ + x1] -
           table_[y1 * stride_ + x] + table_[y * stride_ + x];
  }

 private:
  std::size_t stride_;
  std::vector<double> table_;
};

// Orthonormal 1-D DCT-II basis, basis[k][n].
std::array<std::array<double, kHashSide>, kBlock> DctBasis() {
  std::array<std::array<double, kHashSide>, kBlock> basis{};
  const double n = static_cast<double>(kHashSide);
  for (std::size_t k = 0; k < kBlock; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < kHashSide; ++i) {
      basis[k][i] = scale * std::cos(std::numbers::pi *
                                     (2.0 * static_cast<double>(i) + 1.0) *
                                     static_cast<double>(k) / (2.0 * n));
    }
  }
  return basis;
}

MetricSummary Summarize(const std::vector<double>& v) {
  MetricSummary s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

}  // namespace

double ssim_normalized(const GrayImage& x, const GrayImage& y) {
  if (x.width() != y.width() || x.height() != y.height()) {
    throw ShapeError("ssim_normalized: image sizes differ");
  }
  const std::size_t w = x.width(), h = x.height();
  if (w == 0 || h == 0) throw ShapeError("ssim_normalized: empty image");
  const std::size_t side = std::min<std::size_t>({7, w, h});
  const SummedArea sx(w, h, [&](auto i, auto j) { return x.at(i, j); });
  const SummedArea sy(w, h, [&](auto i, auto j) { return y.at(i, j); });
  const SummedArea sxx(w, h, [&](auto i, auto j) { return x.at(i, j) * x.at(i, j); });
  const SummedArea syy(w, h, [&](auto i, auto j) { return y.at(i, j) * y.at(i, j); });
  const SummedArea sxy(w, h, [&](auto i, auto j) { return x.at(i, j) * y.at(i, j); });
  const double n = static_cast<double>(side * side);
  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t j = 0; j + side <= h; ++j) {
    for (std::size_t i = 0; i + side <= w; ++i) {
      const double mx = sx.box(i, j, side) / n;
      const double my = sy.box(i, j, side) / n;
      const double vx = sxx.box(i, j, side) / n - mx * mx;
      const double vy = syy.box(i, j, side) / n - my * my;
      const double cxy = sxy.box(i, j, side) / n - mx * my;
      total += ((2.0 * mx * my + kC1) * (2.0 * cxy + kC2)) /
               ((mx * mx + my * my + kC1) * (vx + vy + kC2));
      ++windows;
    }
  }
  const double s = total / static_cast<double>(windows);
  return std::clamp((s + 1.0) / 2.0, 0.0, 1.0);
}

GrayImage resize_bilinear(const GrayImage& img, std::size_t width,
                          std::size_t height) {
  if (img.width() == 0 || img.height() == 0 || width == 0 || height == 0) {
    throw ShapeError("resize_bilinear: empty image");
  }
  auto coord = [](std::size_t i, std::size_t out, std::size_t in) {
    if (out == 1) return 0.0;
    return static_cast<double>(i) * static_cast<double>(in - 1) /
           static_cast<double>(out - 1);
  };
  std::vector<double> px(width * height);
  for (std::size_t r = 0; r < height; ++r) {
    const double sy = coord(r, height, img.height());
    const auto y0 = static_cast<std::size_t>(std::floor(sy));
    const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t c = 0; c < width; ++c) {
      const double sx = coord(c, width, img.width());
      const auto x0 = static_cast<std::size_t>(std::floor(sx));
      const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
      const double bot = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
      px[r * width + c] = std::clamp((1.0 - fy) * top + fy * bot, 0.0, 1.0);
    }
  }
  return GrayImage(width, height, std::move(px));
}

std::uint64_t phash(const GrayImage& img) {
  static const auto basis = DctBasis();
  const GrayImage small = resize_bilinear(img, kHashSide, kHashSide);
  // Separable transform: rows first, then the kept columns.
  std::array<std::array<double, kBlock>, kHashSide> rows{};
  for (std::size_t y = 0; y < kHashSide; ++y) {
    for (std::size_t v = 0; v < kBlock; ++v) {
      double acc = 0.0;
      for (std::size_t x = 0; x < kHashSide; ++x) {
        acc += basis[v][x] * small.at(x, y);
      }
      rows[y][v] = acc;
    }
  }
  std::array<double, kBlock * kBlock> coeff{};
  for (std::size_t u = 0; u < kBlock; ++u) {
    for (std::size_t v = 0; v < kBlock; ++v) {
      double acc = 0.0;
      for (std::size_t y = 0; y < kHashSide; ++y) acc += basis[u][y] * rows[y][v];
      coeff[u * kBlock + v] = acc;
    }
  }
  std::array<double, kBlock * kBlock> sorted = coeff;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[31] + sorted[32]);
  std::uint64_t hash = 0;
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (coeff[i] > median) hash |= std::uint64_t{1} << i;
  }
  return hash;
}

double phash_similarity(const GrayImage& x, const GrayImage& y) {
  const int distance = std::popcount(phash(x) ^ phash(y));
  return static_cast<double>(64 - distance) / 64.0;
}

int inference_accuracy(const Mlp& model, const GrayImage& x_star,
                       std::size_t label) {
  if (x_star.pixel_count() != model.input_dim()) {
    throw ShapeError("inference_accuracy: image size does not match model");
  }
  return predict(model, x_star.flatten()) == label ? 1 : 0;
}

LeakageReport summarize_leakage(std::vector<LeakageRecord> records) {
  if (records.empty()) throw ParameterError("summarize_leakage: no records");
  std::vector<double> s, p, f;
  for (const LeakageRecord& r : records) {
    s.push_back(r.ssim);
    p.push_back(r.phash);
    f.push_back(r.infe);
  }
  LeakageReport report;
  report.records = std::move(records);
  report.ssim = Summarize(s);
  report.phash = Summarize(p);
  report.infe = Summarize(f);
  return report;
}

std::string leakage_to_csv(const LeakageReport& report) {
  std::ostringstream out;
  out << "image_id,ssim,phash,infe\n";
  for (const LeakageRecord& r : report.records) {
    out << r.image_id << ',' << format_real(r.ssim) << ','
        << format_real(r.phash) << ',' << r.infe << '\n';
  }
  return out.str();
}

std::string leakage_to_json(const LeakageReport& report) {
  auto summary = [](const MetricSummary& m) {
    return nlohmann::ordered_json{{"mean", m.mean}, {"min", m.min},
                                  {"max", m.max}};
  };
  nlohmann::ordered_json j;
  j["count"] = report.records.size();
  j["ssim"] = summary(report.ssim);
  j["phash"] = summary(report.phash);
  j["infe"] = summary(report.infe);
  return j.dump(2);
}

}  // namespace prunepriv
