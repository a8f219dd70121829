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

#include "prunepriv/io/idx.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "prunepriv/core/errors.h"

namespace prunepriv {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t ReadU32(const std::vector<unsigned char>& b, std::size_t off,
                      const std::filesystem::path& path) {
  if (b.size() < off + 4) {
    throw FormatError(path.string() + ": truncated header at offset " +
                      std::to_string(off));
  }
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

void PutU32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

}  // namespace

LabeledDataset load_idx(const std::filesystem::path& images,
                        const std::filesystem::path& labels) {
  const auto ib = ReadAll(images);
  const auto lb = ReadAll(labels);
  if (ReadU32(ib, 0, images) != kImageMagic) {
    throw FormatError(images.string() + ": bad image magic at offset 0");
  }
  if (ReadU32(lb, 0, labels) != kLabelMagic) {
    throw FormatError(labels.string() + ": bad label magic at offset 0");
  }
  const std::size_t count = ReadU32(ib, 4, images);
  const std::size_t rows = ReadU32(ib, 8, images);
  const std::size_t cols = ReadU32(ib, 12, images);
  const std::size_t label_count = ReadU32(lb, 4, labels);
  if (label_count != count) {
    throw FormatError(labels.string() + ": label count " +
                      std::to_string(label_count) + " at offset 4 does not " +
                      "match image count " + std::to_string(count));
  }
  const std::size_t pixels = rows * cols;
  if (ib.size() < 16 + count * pixels) {
    throw FormatError(images.string() + ": truncated pixel data at offset " +
                      std::to_string(ib.size()));
  }
  if (lb.size() < 8 + count) {
    throw FormatError(labels.string() + ": truncated label data at offset " +
                      std::to_string(lb.size()));
  }
  LabeledDataset data;
  data.images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> px(pixels);
    const std::size_t base = 16 + i * pixels;
    for (std::size_t p = 0; p < pixels; ++p) px[p] = ib[base + p] / 255.0;
    data.images.emplace_back(cols, rows, std::move(px));
    data.labels.push_back(lb[8 + i]);
    data.class_count = std::max(data.class_count, data.labels.back() + 1);
  }
  return data;
}

void write_idx(const LabeledDataset& data, const std::filesystem::path& images,
               const std::filesystem::path& labels) {
  data.validate();
  const std::size_t w = data.images.empty() ? 0 : data.images.front().width();
  const std::size_t h = data.images.empty() ? 0 : data.images.front().height();
  std::ofstream img(images, std::ios::binary);
  std::ofstream lab(labels, std::ios::binary);
  if (!img || !lab) throw Error("cannot open IDX output files");
  PutU32(img, kImageMagic);
  PutU32(img, static_cast<std::uint32_t>(data.size()));
  PutU32(img, static_cast<std::uint32_t>(h));
  PutU32(img, static_cast<std::uint32_t>(w));
  for (const GrayImage& g : data.images) {
    for (double p : g.pixels()) {
      img.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * p))));
    }
  }
  PutU32(lab, kLabelMagic);
  PutU32(lab, static_cast<std::uint32_t>(data.size()));
  for (std::size_t l : data.labels) {
    if (l > 255) throw ParameterError("write_idx: label does not fit a byte");
    lab.put(static_cast<char>(static_cast<unsigned char>(l)));
  }
  if (!img || !lab) throw Error("write failed for IDX output");
}

}  // namespace prunepriv
