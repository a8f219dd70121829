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

#include "prunepriv/image.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "prunepriv/core/errors.h"

namespace prunepriv {
namespace {

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), pixels_(width * height, Clamp01(fill)) {}

GrayImage::GrayImage(std::size_t width, std::size_t height,
                     std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width * height) {
    throw ShapeError("GrayImage: " + std::to_string(pixels_.size()) +
                     " pixels for " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  for (double p : pixels_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ParameterError("GrayImage: pixel outside [0, 1]");
    }
  }
}

void GrayImage::set(std::size_t x, std::size_t y, double v) {
  pixels_[y * width_ + x] = Clamp01(v);
}

GrayImage GrayImage::from_vector(const DenseVector& v, std::size_t width,
                                 std::size_t height) {
  if (v.dim() != width * height) {
    throw ShapeError("GrayImage::from_vector: dimension " +
                     std::to_string(v.dim()) + " for " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<double> px(v.data());
  for (double& p : px) p = Clamp01(p);
  return GrayImage(width, height, std::move(px));
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (double p : img.pixels()) {
    out.put(static_cast<char>(
        static_cast<unsigned char>(std::lround(255.0 * Clamp01(p)))));
  }
  if (!out) throw Error("write failed: " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos;
    while (pos < bytes.size() &&
           std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    }
    if (pos == start) {
      throw FormatError(path.string() + ": expected " + what + " at offset " +
                        std::to_string(start));
    }
    return std::stoul(bytes.substr(start, pos - start));
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError(path.string() + ": bad PGM magic at offset 0");
  }
  pos = 2;
  const std::size_t w = read_int("width");
  const std::size_t h = read_int("height");
  const std::size_t maxval = read_int("maxval");
  if (maxval != 255) {
    throw FormatError(path.string() + ": unsupported maxval " +
                      std::to_string(maxval));
  }
  ++pos;  // single whitespace byte before the raster
  if (bytes.size() < pos + w * h) {
    throw FormatError(path.string() + ": truncated raster at offset " +
                      std::to_string(bytes.size()));
  }
  std::vector<double> px(w * h);
  for (std::size_t i = 0; i < w * h; ++i) {
    px[i] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
  }
  return GrayImage(w, h, std::move(px));
}

}  // namespace prunepriv
