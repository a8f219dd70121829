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

// Monte-Carlo checks of the probabilistic lemmas behind the privacy
// analysis. Every check is a pure function of its arguments and stream.
// Frequency tests allow 3 binomial standard errors of slack.

#ifndef PRUNEPRIV_LEMMA_VERIFY_H_
#define PRUNEPRIV_LEMMA_VERIFY_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "prunepriv/core/matrix.h"
#include "prunepriv/core/rng.h"

namespace prunepriv {

struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  double statistic = 0.0;
  double claimed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
  std::vector<std::pair<std::string, double>> details;

  double detail(const std::string& key) const;  // NaN if absent
};

// Truncated standard normal: compares the sample variance of
// X 1{|X| <= a} (zero-padded) and of X given |X| <= a (conditional) with
// 1 - sqrt(2/pi) a exp(-a^2/2) / erf(a/sqrt(2)), each within 1% relative.
// `note` is "conditional", "zero-padded", "both" or "none"; pass iff at
// least one matches. statistic is the conditional variance.
// samples must be >= 1e5.
CheckReport check_truncated_variance(double a, std::size_t samples,
                                     const RngStream& stream);

// Small-ball probability P[|sum_i alpha_i f(x_i)| <= min(a, 0.1) delta
// ||alpha||_2] for x ~ N(0, I), f(v) = v 1{|v| <= a}, at each delta of the
// grid (same samples throughout). statistic is the minimum over the grid of
// probability / delta; pass iff that ratio plus its 3-SE slack reaches
// `floor` and the probabilities are non-decreasing along the sorted grid.
CheckReport check_anticoncentration(const DenseVector& alpha, double a,
                                    std::vector<double> delta_grid,
                                    std::size_t samples,
                                    const RngStream& stream,
                                    double floor = 0.05);

// Removed-mass entries y 1{0 <= y <= a}, y ~ N(0, sigma_a^2), m x d; event
// "(removed x)_i >= 0.02 a^2 / sigma_a for all i". statistic is the event
// frequency, claimed 1 - delta. `note` says whether the precondition
// a / sigma_a >= 20 log(m / delta) holds; the check runs either way.
// An empty x means the uniform vector 1/d.
CheckReport check_folded_lower_bound(double a, double sigma_a, std::size_t m,
                                     std::size_t d, double delta,
                                     std::size_t trials,
                                     const RngStream& stream,
                                     DenseVector x = {});

// u_i = y 1{|y| <= a}, y ~ N(0, sigma^2); tail event
// |<u, x>| >= 10 ||x||_2 a (sqrt(a / sigma) + 1) log(1 / delta), counted only
// when <u, x> != 0. statistic is the tail frequency, claimed delta.
CheckReport check_inner_product(double a, double sigma, std::size_t d,
                                const DenseVector& x, double delta,
                                std::size_t trials, const RngStream& stream);

// Samples A ~ N(0, sigma_a^2)^{m x d} and compares the max column l1 / l2
// norms with gs1_bound / gs2_bound. statistic is the larger violation rate.
CheckReport check_sensitivity_bounds(std::size_t m, std::size_t d,
                                     double sigma_a, double delta,
                                     std::size_t trials,
                                     const RngStream& stream);

// Fixed A ~ N(0, sigma_a^2)^{m x d} pruned to sparsity k and a unit folded
// Gaussian x; compares (1/m) mean ||e - removed x||^2 over `draws` pruning
// noise draws with (2 sigma^2 / m) ||removed x||^2, within `rel_tol`.
CheckReport check_noise_second_moment(std::size_t m, std::size_t d,
                                      double sigma_a, double k, double sigma,
                                      std::size_t draws,
                                      const RngStream& stream,
                                      double rel_tol = 0.05);

struct VerifyConfig {
  double trunc_a = 1.0;
  std::size_t trunc_samples = 1000000;

  DenseVector anti_alpha = DenseVector(10, 1.0);
  double anti_a = 1.0;
  std::vector<double> anti_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  std::size_t anti_samples = 400000;
  double anti_floor = 0.05;

  double folded_a = 93.0;
  double folded_sigma_a = 1.0;
  std::size_t folded_m = 10;
  std::size_t folded_d = 100;
  double folded_delta = 0.1;
  std::size_t folded_trials = 1000;

  double inner_a = 1.0;
  double inner_sigma = 1.0;
  std::size_t inner_d = 100;
  double inner_delta = 0.05;
  std::size_t inner_trials = 10000;

  std::size_t sens_m = 100;
  std::size_t sens_d = 50;
  double sens_sigma_a = 1.0;
  double sens_delta = 0.1;
  std::size_t sens_trials = 1000;

  std::size_t noise_m = 100;
  std::size_t noise_d = 100;
  double noise_k = 0.5;
  double noise_sigma = 1.0;
  std::size_t noise_draws = 100000;
};

// Runs every check; check i draws from stream.child(i).
std::vector<CheckReport> run_all_checks(const VerifyConfig& cfg,
                                        const RngStream& stream,
                                        std::size_t jobs = 1);

// `check,samples,statistic,claimed,tolerance,pass,note` rows.
std::string reports_to_csv(const std::vector<CheckReport>& reports);
std::string reports_to_json(const std::vector<CheckReport>& reports);

}  // namespace prunepriv

#endif  // PRUNEPRIV_LEMMA_VERIFY_H_
