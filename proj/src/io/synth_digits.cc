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

#include "prunepriv/io/synth_digits.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "prunepriv/core/errors.h"

namespace prunepriv {
namespace {

using Glyph = std::array<std::string_view, kDigitSide>;

constexpr std::array<Glyph, 10> kGlyphs = {{
    {"..####..", ".#....#.", ".#...##.", ".#..#.#.", ".#.#..#.", ".##...#.",
     ".#....#.", "..####.."},
    {"...##...", "..###...", ".#.##...", "...##...", "...##...", "...##...",
     "...##...", ".######."},
    {"..####..", ".#....#.", "......#.", ".....#..", "....#...", "...#....",
     "..#.....", ".######."},
    {".#####..", "......#.", "......#.", "..####..", "......#.", "......#.",
     "......#.", ".#####.."},
    {".....#..", "....##..", "...#.#..", "..#..#..", ".#...#..", ".######.",
     ".....#..", ".....#.."},
    {".######.", ".#......", ".#......", ".#####..", "......#.", "......#.",
     ".#....#.", "..####.."},
    {"..####..", ".#......", ".#......", ".#####..", ".#....#.", ".#....#.",
     ".#....#.", "..####.."},
    {".######.", "......#.", ".....#..", ".....#..", "....#...", "....#...",
     "...#....", "...#...."},
    {"..####..", ".#....#.", ".#....#.", "..####..", ".#....#.", ".#....#.",
     ".#....#.", "..####.."},
    {"..####..", ".#....#.", ".#....#.", ".#....#.", "..#####.", "......#.",
     "......#.", "..####.."},
}};

}  // namespace

GrayImage digit_template(std::size_t digit) {
  if (digit >= kGlyphs.size()) {
    throw ParameterError("digit_template: digit must be in 0..9");
  }
  std::vector<double> px(kDigitSide * kDigitSide, 0.0);
  for (std::size_t y = 0; y < kDigitSide; ++y) {
    for (std::size_t x = 0; x < kDigitSide; ++x) {
      if (kGlyphs[digit][y][x] == '#') px[y * kDigitSide + x] = 1.0;
    }
  }
  return GrayImage(kDigitSide, kDigitSide, std::move(px));
}

LabeledDataset synth_digits(std::size_t count_per_class, double noise,
                            const RngStream& stream) {
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw ParameterError("synth_digits: noise level must be >= 0");
  }
  LabeledDataset data;
  data.class_count = kGlyphs.size();
  for (std::size_t c = 0; c < kGlyphs.size(); ++c) {
    const GrayImage glyph = digit_template(c);
    for (std::size_t i = 0; i < count_per_class; ++i) {
      std::vector<double> px(glyph.pixels().begin(), glyph.pixels().end());
      if (noise > 0.0) {
        RandomEngine eng = stream.child(c, i).engine();
        for (double& p : px) p = std::clamp(p + eng.normal(0.0, noise), 0.0, 1.0);
      }
      data.images.emplace_back(kDigitSide, kDigitSide, std::move(px));
      data.labels.push_back(c);
    }
  }
  return data;
}

}  // namespace prunepriv
