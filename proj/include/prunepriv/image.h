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

#ifndef PRUNEPRIV_IMAGE_H_
#define PRUNEPRIV_IMAGE_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "prunepriv/core/matrix.h"

namespace prunepriv {

// Grayscale image, row-major, every pixel in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, double fill = 0.0);
  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t pixel_count() const { return pixels_.size(); }

  // (x, y) = (column, row).
  double at(std::size_t x, std::size_t y) const {
    return pixels_[y * width_ + x];
  }
  // Writes are clamped into [0, 1].
  void set(std::size_t x, std::size_t y, double v);

  std::span<const double> pixels() const { return pixels_; }

  DenseVector flatten() const { return DenseVector(pixels_); }
  // Inverse of flatten; values are clamped into [0, 1].
  static GrayImage from_vector(const DenseVector& v, std::size_t width,
                               std::size_t height);

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

// Binary PGM (P5, maxval 255). Pixel byte = round(255 * value).
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace prunepriv

#endif  // PRUNEPRIV_IMAGE_H_
