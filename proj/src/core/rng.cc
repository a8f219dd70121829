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

#include "prunepriv/core/rng.h"

#include <cmath>

namespace prunepriv {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream RngStream::child(std::uint64_t index) const {
  RngStream out = *this;
  out.path_.push_back(index);
  return out;
}

std::uint64_t RngStream::derived_seed() const {
  std::uint64_t h = splitmix64(base_seed_ ^ 0x9E3779B97F4A7C15ULL);
  for (std::uint64_t p : path_) {
    h = splitmix64(h ^ splitmix64(p + 0xD1B54A32D192ED03ULL));
  }
  return h;
}

RandomEngine RngStream::engine() const { return RandomEngine(derived_seed()); }

double RandomEngine::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomEngine::uniform_open() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RandomEngine::uniform_index(std::uint64_t n) {
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = gen_();
  } while (r >= limit);
  return r % n;
}

double RandomEngine::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double RandomEngine::laplace(double location, double scale) {
  const double u = uniform_open() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? location - magnitude : location + magnitude;
}

}  // namespace prunepriv
