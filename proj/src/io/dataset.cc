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

#include "prunepriv/io/dataset.h"

#include <algorithm>
#include <string>

#include "prunepriv/core/errors.h"

namespace prunepriv {

void LabeledDataset::validate() const {
  if (images.size() != labels.size()) {
    throw ConsistencyError("dataset: " + std::to_string(images.size()) +
                           " images but " + std::to_string(labels.size()) +
                           " labels");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].width() != images.front().width() ||
        images[i].height() != images.front().height()) {
      throw ConsistencyError("dataset: image " + std::to_string(i) +
                             " has a different size");
    }
    if (labels[i] >= class_count) {
      throw ConsistencyError("dataset: label " + std::to_string(labels[i]) +
                             " >= class count " + std::to_string(class_count));
    }
  }
}

Dataset LabeledDataset::to_examples() const {
  validate();
  Dataset out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.push_back({images[i].flatten(), labels[i]});
  }
  return out;
}

GrayImage downsample_pool(const GrayImage& img, std::size_t factor) {
  if (factor == 0 || img.width() % factor != 0 || img.height() % factor != 0) {
    throw ParameterError("downsample_pool: " + std::to_string(img.width()) +
                         "x" + std::to_string(img.height()) +
                         " is not divisible by " + std::to_string(factor));
  }
  const std::size_t w = img.width() / factor;
  const std::size_t h = img.height() / factor;
  const double inv = 1.0 / static_cast<double>(factor * factor);
  std::vector<double> px(w * h, 0.0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double sum = 0.0;
      for (std::size_t dy = 0; dy < factor; ++dy) {
        for (std::size_t dx = 0; dx < factor; ++dx) {
          sum += img.at(x * factor + dx, y * factor + dy);
        }
      }
      px[y * w + x] = std::min(1.0, sum * inv);
    }
  }
  return GrayImage(w, h, std::move(px));
}

}  // namespace prunepriv
