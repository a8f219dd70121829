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

// Sensitivity bounds, classical DP mechanisms, the structured pruning-noise
// mechanism, noise calibration and a per-instance DP certificate.

#ifndef PRUNEPRIV_PRIVACY_H_
#define PRUNEPRIV_PRIVACY_H_

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "prunepriv/core/matrix.h"
#include "prunepriv/core/rng.h"

namespace prunepriv {

struct PrivacyBudget {
  double eps_dp = 0.5;
  double delta_dp = 0.1;
  // Throws ParameterError unless eps_dp > 0 and delta_dp in (0, 1).
  void validate() const;
};

struct ClosenessSpec {
  double eps_ap = 0.05;
  double delta_ap = 0.1;
  void validate() const;
};

enum class MechanismKind { kStructuredPruningNoise, kLaplace, kGaussian };
enum class CalibrationVariant { kGeneralX, kPositiveX };

struct MechanismConfig {
  MechanismKind kind = MechanismKind::kStructuredPruningNoise;
  double sigma = 1.0;
  CalibrationVariant variant = CalibrationVariant::kPositiveX;
  void validate() const;
};

// Max column l1 norm of A: sup ||A (x1 - x2)||_1 over ||x1 - x2||_1 <= 1,
// hence an upper bound on GS_1 of x -> relu(Ax + b).
double gs1_linear_sup(const DenseMatrix& a);
// Max column l2 norm of A, the GS_2 counterpart.
double gs2_linear_sup(const DenseMatrix& a);

// True for delta in (0, 0.1], the regime the tail lemmas are stated for.
// The bound formulas evaluate outside it; callers decide whether to warn.
bool in_lemma_delta_regime(double delta);

// sigma_a m + 4 sigma_a sqrt(m) log^1.5(m d / delta).
// Requires m, d >= 1, sigma_a >= 0, delta in (0, 1).
double gs1_bound(std::size_t m, std::size_t d, double sigma_a, double delta);
// sigma_a (sqrt(m d) + sqrt(2 log(1 / delta))).
double gs2_bound(std::size_t m, std::size_t d, double sigma_a, double delta);

// out + Lap(0, gs1 / eps) per coordinate.
DenseVector laplace_mechanism(const DenseVector& out, double gs1, double eps,
                              const RngStream& stream);

// c = 2.01 sqrt(log(1 / delta)).
double gaussian_mechanism_constant(double delta);
// out + N(0, (c gs2 / eps)^2) per coordinate.
DenseVector gaussian_mechanism(const DenseVector& out, double gs2, double eps,
                               double delta, const RngStream& stream);

// e_i = L_i (removed x)_i with L_i ~ Laplace(1, sigma) i.i.d., so E[e] =
// removed x and e vanishes wherever the removed-mass response does.
DenseVector pruning_noise(const DenseMatrix& removed, const DenseVector& x,
                          double sigma, const RngStream& stream);

// Solves the calibration formula for sigma:
//   positive-x: sigma = 2 gs1 log(m / delta_dp) / (eps_dp sigma_a)
//   general-x:  sigma = 2 gs1 (m / delta_dp) / (eps_dp sigma_a)
// Only positivity of eps_dp and delta_dp is required here, and the
// positive-x log term must be positive.
double calibrate_sigma(const PrivacyBudget& budget, double gs1_value,
                       double sigma_a, std::size_t m,
                       CalibrationVariant variant);

// Per-instance privacy loss bound for h(x) = relu(Ax + b) + e:
//   2 ||f(x1) - f(x2)||_1 / (sigma min_i min(|(removed x1)_i|,
//                                              |(removed x2)_i|)).
// Requires ||x1 - x2||_1 <= 1 (ParameterError otherwise). Throws
// CertificateUndefinedError when some (removed x)_i is zero.
//
// The bound dominates the true log density ratio only when both inputs give
// the same |(removed x)_i| in every row; with unequal noise scales the
// ratio of the two Laplace densities is unbounded in the tails.
double dp_certificate(const DenseMatrix& a, const DenseMatrix& removed,
                      double sigma, const DenseVector& x1,
                      const DenseVector& x2, const DenseVector& b);

// Same chain with the worst-case gs1 in place of the instance difference.
double dp_certificate_gs1(double gs1_value, const DenseMatrix& removed,
                          double sigma, const DenseVector& x1,
                          const DenseVector& x2);

struct ClosenessEstimate {
  double mean_err = 0.0;
  double q_err = 0.0;
  bool satisfied = false;
  std::vector<double> errors;  // per trial, in trial order
};

// Draws (g(x), h(x)) for one trial from that trial's stream.
using PairSampler =
    std::function<std::pair<DenseVector, DenseVector>(const RngStream&)>;
using OutputSampler = std::function<DenseVector(const RngStream&)>;

// Nearest-rank (1 - delta) quantile of `values`: the element at sorted
// index ceil((1 - delta) n) - 1, clamped to [0, n - 1].
double nearest_rank_quantile(std::vector<double> values, double delta);

// Trial t evaluates sample(stream.child(t)); per-trial error is
// (1 / sqrt(m)) ||g - h||_2. satisfied iff q_err <= eps_ap.
ClosenessEstimate closeness_estimate(const PairSampler& sample, std::size_t m,
                                     std::size_t trials,
                                     const ClosenessSpec& spec,
                                     const RngStream& stream);
// Two-sampler form; both samplers receive the same trial stream, so any
// shared draws (weights, inputs) are paired.
ClosenessEstimate closeness_estimate(const OutputSampler& g,
                                     const OutputSampler& h, std::size_t m,
                                     std::size_t trials,
                                     const ClosenessSpec& spec,
                                     const RngStream& stream);

}  // namespace prunepriv

#endif  // PRUNEPRIV_PRIVACY_H_
