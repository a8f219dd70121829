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

#ifndef PRUNEPRIV_IO_DATASET_H_
#define PRUNEPRIV_IO_DATASET_H_

#include <cstddef>
#include <vector>

#include "prunepriv/image.h"
#include "prunepriv/network.h"

namespace prunepriv {

struct LabeledDataset {
  std::vector<GrayImage> images;
  std::vector<std::size_t> labels;
  std::size_t class_count = 0;

  std::size_t size() const { return images.size(); }
  // Throws ConsistencyError on length mismatch, ragged image sizes or a
  // label >= class_count.
  void validate() const;
  // Flattened images paired with labels.
  Dataset to_examples() const;
};

// Non-overlapping factor x factor mean pooling. Throws ParameterError
// unless both sides are divisible by factor (factor >= 1).
GrayImage downsample_pool(const GrayImage& img, std::size_t factor);

}  // namespace prunepriv

#endif  // PRUNEPRIV_IO_DATASET_H_
