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

// IDX image/label files: big-endian magic 0x00000803 (count, rows, cols,
// then unsigned bytes) and 0x00000801 (count, then label bytes).

#ifndef PRUNEPRIV_IO_IDX_H_
#define PRUNEPRIV_IO_IDX_H_

#include <filesystem>

#include "prunepriv/io/dataset.h"

namespace prunepriv {

// Pixels are scaled by 1/255; class_count is 1 + the largest label.
// Bad magic, truncation and count mismatch raise FormatError naming the
// byte offset.
LabeledDataset load_idx(const std::filesystem::path& images,
                        const std::filesystem::path& labels);

// Pixels are stored as round(255 v).
void write_idx(const LabeledDataset& data, const std::filesystem::path& images,
               const std::filesystem::path& labels);

}  // namespace prunepriv

#endif  // PRUNEPRIV_IO_IDX_H_
