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

#include "prunepriv/inversion.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prunepriv/core/errors.h"
#include "prunepriv/core/format.h"

namespace prunepriv {
namespace {

struct Objective {
  const Mlp& model;
  std::size_t layer;
  const DenseVector& target;
  std::size_t width;
  std::size_t height;
  const InversionConfig& cfg;

  double operator()(const DenseVector& x, DenseVector* grad) const {
    double f = representation_loss(model, layer, x, target, grad);
    if (cfg.lambda > 0.0) {
      std::vector<double> tv_grad;
      const double tv = total_variation_smoothed(
          x.values(), width, height, cfg.tau, grad ? &tv_grad : nullptr);
      f += cfg.lambda * tv;
      if (grad != nullptr) {
        for (std::size_t i = 0; i < tv_grad.size(); ++i) {
          (*grad)[i] += cfg.lambda * tv_grad[i];
        }
      }
    }
    return f;
  }
};

DenseVector InitialImage(std::size_t n, const InversionConfig& cfg,
                         std::size_t width, std::size_t height) {
  switch (cfg.init) {
    case InversionInit::kMidGray:
      return DenseVector(n, 0.5);
    case InversionInit::kProvided:
      if (!cfg.init_image || cfg.init_image->width() != width ||
          cfg.init_image->height() != height) {
        throw ShapeError("invert: provided init image does not match shape");
      }
      return cfg.init_image->flatten();
    case InversionInit::kUniformRandom:
      break;
  }
  RandomEngine eng = cfg.stream.engine();
  DenseVector x(n);
  for (double& v : x.values()) v = eng.uniform();
  return x;
}

}  // namespace

double total_variation(const GrayImage& img) {
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  double sum = 0.0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double a = img.at(x, y);
      const double dv = y + 1 < h ? img.at(x, y + 1) - a : 0.0;
      const double dh = x + 1 < w ? img.at(x + 1, y) - a : 0.0;
      sum += std::sqrt(dv * dv + dh * dh);
    }
  }
  return sum;
}

double total_variation_smoothed(std::span<const double> pixels,
                                std::size_t width, std::size_t height,
                                double tau, std::vector<double>* grad) {
  if (pixels.size() != width * height) {
    throw ShapeError("total_variation: pixel count does not match shape");
  }
  if (grad != nullptr) grad->assign(pixels.size(), 0.0);
  double sum = 0.0;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t p = y * width + x;
      const bool has_down = y + 1 < height;
      const bool has_right = x + 1 < width;
      const double dv = has_down ? pixels[p + width] - pixels[p] : 0.0;
      const double dh = has_right ? pixels[p + 1] - pixels[p] : 0.0;
      const double s = std::sqrt(dv * dv + dh * dh + tau);
      sum += s;
      if (grad != nullptr && s > 0.0) {
        if (has_down) (*grad)[p + width] += dv / s;
        if (has_right) (*grad)[p + 1] += dh / s;
        (*grad)[p] -= (dv + dh) / s;
      }
    }
  }
  return sum;
}

void InversionConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("InversionConfig: lambda must be >= 0");
  }
  if (!(step_size > 0.0)) throw ParameterError("InversionConfig: step <= 0");
  if (!(tolerance >= 0.0)) throw ParameterError("InversionConfig: tol < 0");
  if (!(tau >= 0.0)) throw ParameterError("InversionConfig: tau < 0");
  if (!(armijo > 0.0 && armijo < 1.0)) {
    throw ParameterError("InversionConfig: armijo constant must be in (0, 1)");
  }
}

InversionResult invert(const Mlp& model, std::size_t layer,
                       const DenseVector& target, std::size_t width,
                       std::size_t height, const InversionConfig& cfg) {
  cfg.validate();
  const std::size_t n = width * height;
  if (n != model.input_dim()) {
    throw ShapeError("invert: image shape " + std::to_string(width) + "x" +
                     std::to_string(height) + " does not match input dim " +
                     std::to_string(model.input_dim()));
  }
  if (layer >= model.layer_count() ||
      target.dim() != model.layer(layer).weights.rows()) {
    throw ShapeError("invert: target does not match the representation");
  }
  const Objective objective{model, layer, target, width, height, cfg};

  InversionResult result;
  DenseVector x = InitialImage(n, cfg, width, height);
  DenseVector grad;
  double f = objective(x, &grad);
  result.trace.push_back(f);
  double step = cfg.step_size;

  while (result.steps < cfg.max_steps && f > 0.0) {
    bool accepted = false;
    DenseVector trial(n);
    double f_trial = f;
    while (step >= cfg.min_step) {
      double decrease = 0.0;  // grad . (x - trial) >= 0 for a projected step
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = std::clamp(x[i] - step * grad[i], 0.0, 1.0);
        decrease += grad[i] * (x[i] - trial[i]);
      }
      if (decrease <= 0.0) break;  // projected gradient vanishes
      f_trial = objective(trial, nullptr);
      if (f_trial <= f - cfg.armijo * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double rel = (f - f_trial) / std::max(f, 1e-300);
    x = std::move(trial);
    f = objective(x, &grad);
    result.trace.push_back(f);
    ++result.steps;
    step *= 2.0;
    if (rel < cfg.tolerance) break;
  }
  result.image = GrayImage::from_vector(x, width, height);
  return result;
}

std::string trace_to_csv(const std::vector<double>& trace) {
  std::ostringstream out;
  out << "step,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << format_real(trace[i]) << '\n';
  }
  return out.str();
}

}  // namespace prunepriv
