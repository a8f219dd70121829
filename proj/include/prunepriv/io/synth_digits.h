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

// Small synthetic digit set: ten fixed 8x8 glyphs plus pixel noise.

#ifndef PRUNEPRIV_IO_SYNTH_DIGITS_H_
#define PRUNEPRIV_IO_SYNTH_DIGITS_H_

#include <cstddef>

#include "prunepriv/core/rng.h"
#include "prunepriv/image.h"
#include "prunepriv/io/dataset.h"

namespace prunepriv {

inline constexpr std::size_t kDigitSide = 8;

// The noiseless glyph for `digit` (0..9); ink is 1, background 0.
GrayImage digit_template(std::size_t digit);

// count_per_class images per digit, ordered class-major. Pixel noise is
// N(0, noise^2), clamped to [0, 1]; image (c, i) draws from stream.child(c, i).
LabeledDataset synth_digits(std::size_t count_per_class, double noise,
                            const RngStream& stream);

}  // namespace prunepriv

#endif  // PRUNEPRIV_IO_SYNTH_DIGITS_H_
