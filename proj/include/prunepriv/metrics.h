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

#ifndef PRUNEPRIV_METRICS_H_
#define PRUNEPRIV_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prunepriv/image.h"
#include "prunepriv/network.h"

namespace prunepriv {

// Mean SSIM over all stride-1 uniform windows of side min(7, width, height),
// with C1 = 0.01^2, C2 = 0.03^2 and population (1/N) window moments, mapped
// to [0, 1] by (s + 1) / 2. Throws ShapeError on a size mismatch.
double ssim_normalized(const GrayImage& x, const GrayImage& y);

// Corner-aligned bilinear resize: output (i, j) samples the source at
// (i (h_in - 1) / (h_out - 1), j (w_in - 1) / (w_out - 1)).
GrayImage resize_bilinear(const GrayImage& img, std::size_t width,
                          std::size_t height);

// 64-bit DCT hash: resize to 32x32, orthonormal 2-D DCT-II, keep the
// top-left 8x8 block (DC included), bit r*8+c set iff coefficient (r, c)
// exceeds the block median (mean of the 32nd and 33rd order statistics).
std::uint64_t phash(const GrayImage& img);

// (64 - popcount(phash(x) ^ phash(y))) / 64.
double phash_similarity(const GrayImage& x, const GrayImage& y);

// 1 iff predict(model, flatten(x_star)) == label.
int inference_accuracy(const Mlp& model, const GrayImage& x_star,
                       std::size_t label);

struct LeakageRecord {
  std::size_t image_id = 0;
  double ssim = 0.0;
  double phash = 0.0;
  int infe = 0;
};

struct MetricSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct LeakageReport {
  std::vector<LeakageRecord> records;
  MetricSummary ssim;
  MetricSummary phash;
  MetricSummary infe;
};

// Batch means and ranges of the records. Empty input -> ParameterError.
LeakageReport summarize_leakage(std::vector<LeakageRecord> records);

// `image_id,ssim,phash,infe` rows.
std::string leakage_to_csv(const LeakageReport& report);
// {"count", "ssim": {mean,min,max}, "phash": {...}, "infe": {...}}.
std::string leakage_to_json(const LeakageReport& report);

}  // namespace prunepriv

#endif  // PRUNEPRIV_METRICS_H_
