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

// Representation inversion: find an image whose representation under a
// known network prefix matches a target, with a total-variation prior.

#ifndef PRUNEPRIV_INVERSION_H_
#define PRUNEPRIV_INVERSION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prunepriv/core/matrix.h"
#include "prunepriv/core/rng.h"
#include "prunepriv/image.h"
#include "prunepriv/network.h"

namespace prunepriv {

// sum_{i,j} sqrt((a_{i+1,j} - a_{i,j})^2 + (a_{i,j+1} - a_{i,j})^2), with
// forward differences leaving the image counted as 0.
double total_variation(const GrayImage& img);

// Same sum with tau added under each root, which makes it differentiable
// everywhere. Writes the gradient (row-major) into `grad` when non-null.
double total_variation_smoothed(std::span<const double> pixels,
                                std::size_t width, std::size_t height,
                                double tau, std::vector<double>* grad);

enum class InversionInit { kUniformRandom, kMidGray, kProvided };

struct InversionConfig {
  double lambda = 0.01;
  std::size_t max_steps = 500;
  double step_size = 1.0;  // first trial step of the line search
  InversionInit init = InversionInit::kUniformRandom;
  std::optional<GrayImage> init_image;  // used with kProvided
  RngStream stream;                     // used with kUniformRandom
  double tolerance = 1e-9;              // on the relative objective decrease
  double tau = 1e-12;
  double armijo = 1e-4;
  double min_step = 1e-14;

  void validate() const;
};

struct InversionResult {
  GrayImage image;
  // Objective at the initial image, then after every accepted step.
  std::vector<double> trace;
  std::size_t steps = 0;
};

// Minimizes ||representation(model, layer, x) - target||^2 + lambda TV(x)
// over x in [0, 1]^(width * height) by projected gradient descent. Each step
// halves the trial step until the Armijo condition holds, so the trace is
// non-increasing. Stops after max_steps, when no step decreases the
// objective, or when the relative decrease drops below the tolerance.
InversionResult invert(const Mlp& model, std::size_t layer,
                       const DenseVector& target, std::size_t width,
                       std::size_t height, const InversionConfig& cfg);

// "step,objective" rows.
std::string trace_to_csv(const std::vector<double>& trace);

}  // namespace prunepriv

#endif  // PRUNEPRIV_INVERSION_H_
