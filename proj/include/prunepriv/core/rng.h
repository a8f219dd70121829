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

#ifndef PRUNEPRIV_CORE_RNG_H_
#define PRUNEPRIV_CORE_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace prunepriv {

class RandomEngine;

// A named position in a tree of random streams.
//
// A stream is the pair (base_seed, path). Children are derived by appending
// an index to the path, so the seed of any node depends only on its own
// coordinates and never on the order in which siblings are consumed. The
// engine seed is a splitmix64 hash chain:
//
//   h0 = mix(base_seed ^ 0x9E3779B97F4A7C15)
//   h_{i+1} = mix(h_i ^ mix(path[i] + 0xD1B54A32D192ED03))
//
// Two streams with equal (base_seed, path) yield identical sample sequences.
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t base_seed) : base_seed_(base_seed) {}
  RngStream(std::uint64_t base_seed, std::vector<std::uint64_t> path)
      : base_seed_(base_seed), path_(std::move(path)) {}

  std::uint64_t base_seed() const { return base_seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  RngStream child(std::uint64_t index) const;
  RngStream child(std::uint64_t i, std::uint64_t j) const {
    return child(i).child(j);
  }

  std::uint64_t derived_seed() const;

  // A fresh engine positioned at the start of this stream.
  RandomEngine engine() const;

  bool operator==(const RngStream&) const = default;

 private:
  std::uint64_t base_seed_ = 0;
  std::vector<std::uint64_t> path_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Sequential sampler over one stream. Transforms from raw 64-bit words are
// written out here rather than delegated to <random> distributions, whose
// algorithms are implementation-defined.
class RandomEngine {
 public:
  explicit RandomEngine(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on the open interval (0, 1).
  double uniform_open();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard normal via the Marsaglia polar method.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Laplace(location, scale) by inverse CDF from one open uniform draw.
  double laplace(double location, double scale);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace prunepriv

#endif  // PRUNEPRIV_CORE_RNG_H_
