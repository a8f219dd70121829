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

#include "prunepriv/privacy.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "prunepriv/core/errors.h"

namespace prunepriv {
namespace {

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be > 0, got " +
                         std::to_string(v));
  }
}

void RequireFraction(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ParameterError(std::string(what) + " must be in (0, 1), got " +
                         std::to_string(v));
  }
}

void CheckBoundArgs(std::size_t m, std::size_t d, double sigma_a,
                    double delta) {
  if (m == 0 || d == 0) throw ParameterError("sensitivity bound: m, d >= 1");
  if (!(sigma_a >= 0.0) || !std::isfinite(sigma_a)) {
    throw ParameterError("sensitivity bound: sigma_a must be >= 0");
  }
  RequireFraction(delta, "sensitivity bound: delta");
}

double MinAbsResponse(const DenseMatrix& removed, const DenseVector& x1,
                      const DenseVector& x2) {
  const DenseVector r1 = matvec(removed, x1);
  const DenseVector r2 = matvec(removed, x2);
  double lo = INFINITY;
  for (std::size_t i = 0; i < r1.dim(); ++i) {
    lo = std::min({lo, std::abs(r1[i]), std::abs(r2[i])});
  }
  if (!(lo > 0.0)) {
    throw CertificateUndefinedError(
        "dp_certificate: a removed-mass response (removed x)_i is zero; the "
        "density ratio is undefined");
  }
  return lo;
}

void CheckNeighbors(const DenseVector& x1, const DenseVector& x2) {
  if (x1.dim() != x2.dim()) throw ShapeError("dp_certificate: x1/x2 dims");
  if (norms(x1 - x2).l1 > 1.0) {
    throw ParameterError("dp_certificate: inputs are not neighbors "
                         "(||x1 - x2||_1 > 1)");
  }
}

double ColumnNormMax(const DenseMatrix& a, bool squared) {
  std::vector<double> acc(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) {
      acc[c] += squared ? row[c] * row[c] : std::abs(row[c]);
    }
  }
  double best = 0.0;
  for (double v : acc) best = std::max(best, squared ? std::sqrt(v) : v);
  return best;
}

}  // namespace

void PrivacyBudget::validate() const {
  RequirePositive(eps_dp, "eps_dp");
  RequireFraction(delta_dp, "delta_dp");
}

void ClosenessSpec::validate() const {
  RequirePositive(eps_ap, "eps_ap");
  RequireFraction(delta_ap, "delta_ap");
}

void MechanismConfig::validate() const { RequirePositive(sigma, "sigma"); }

double gs1_linear_sup(const DenseMatrix& a) { return ColumnNormMax(a, false); }

double gs2_linear_sup(const DenseMatrix& a) { return ColumnNormMax(a, true); }

bool in_lemma_delta_regime(double delta) { return delta > 0.0 && delta <= 0.1; }

double gs1_bound(std::size_t m, std::size_t d, double sigma_a, double delta) {
  CheckBoundArgs(m, d, sigma_a, delta);
  const double md = static_cast<double>(m) * static_cast<double>(d);
  const double sm = std::sqrt(static_cast<double>(m));
  return sigma_a * static_cast<double>(m) +
         4.0 * sigma_a * sm * std::pow(std::log(md / delta), 1.5);
}

double gs2_bound(std::size_t m, std::size_t d, double sigma_a, double delta) {
  CheckBoundArgs(m, d, sigma_a, delta);
  const double md = static_cast<double>(m) * static_cast<double>(d);
  return sigma_a * (std::sqrt(md) + std::sqrt(2.0 * std::log(1.0 / delta)));
}

DenseVector laplace_mechanism(const DenseVector& out, double gs1, double eps,
                              const RngStream& stream) {
  RequirePositive(gs1, "laplace_mechanism: gs1");
  RequirePositive(eps, "laplace_mechanism: eps");
  const double scale = gs1 / eps;
  RandomEngine eng = stream.engine();
  DenseVector noisy = out;
  for (double& v : noisy.values()) v += eng.laplace(0.0, scale);
  return noisy;
}

double gaussian_mechanism_constant(double delta) {
  RequireFraction(delta, "gaussian_mechanism: delta");
  return 2.01 * std::sqrt(std::log(1.0 / delta));
}

DenseVector gaussian_mechanism(const DenseVector& out, double gs2, double eps,
                               double delta, const RngStream& stream) {
  RequirePositive(gs2, "gaussian_mechanism: gs2");
  RequirePositive(eps, "gaussian_mechanism: eps");
  const double sd = gaussian_mechanism_constant(delta) * gs2 / eps;
  RandomEngine eng = stream.engine();
  DenseVector noisy = out;
  for (double& v : noisy.values()) v += eng.normal(0.0, sd);
  return noisy;
}

DenseVector pruning_noise(const DenseMatrix& removed, const DenseVector& x,
                          double sigma, const RngStream& stream) {
  RequirePositive(sigma, "pruning_noise: sigma");
  DenseVector e = matvec(removed, x);
  RandomEngine eng = stream.engine();
  for (double& v : e.values()) v *= eng.laplace(1.0, sigma);
  return e;
}

double calibrate_sigma(const PrivacyBudget& budget, double gs1_value,
                       double sigma_a, std::size_t m,
                       CalibrationVariant variant) {
  RequirePositive(budget.eps_dp, "calibrate_sigma: eps_dp");
  RequirePositive(budget.delta_dp, "calibrate_sigma: delta_dp");
  RequirePositive(gs1_value, "calibrate_sigma: gs1");
  RequirePositive(sigma_a, "calibrate_sigma: sigma_a");
  if (m == 0) throw ParameterError("calibrate_sigma: m must be >= 1");
  const double ratio = static_cast<double>(m) / budget.delta_dp;
  double factor = ratio;
  if (variant == CalibrationVariant::kPositiveX) {
    factor = std::log(ratio);
    if (!(factor > 0.0)) {
      throw ParameterError("calibrate_sigma: log(m / delta_dp) must be > 0");
    }
  }
  return 2.0 * gs1_value * factor / (budget.eps_dp * sigma_a);
}

double dp_certificate(const DenseMatrix& a, const DenseMatrix& removed,
                      double sigma, const DenseVector& x1,
                      const DenseVector& x2, const DenseVector& b) {
  RequirePositive(sigma, "dp_certificate: sigma");
  CheckNeighbors(x1, x2);
  if (!a.same_shape(removed)) throw ShapeError("dp_certificate: A vs removed");
  const double lo = MinAbsResponse(removed, x1, x2);
  const DenseVector f1 = relu(matvec(a, x1) + b);
  const DenseVector f2 = relu(matvec(a, x2) + b);
  return 2.0 * norms(f1 - f2).l1 / (sigma * lo);
}

double dp_certificate_gs1(double gs1_value, const DenseMatrix& removed,
                          double sigma, const DenseVector& x1,
                          const DenseVector& x2) {
  RequirePositive(sigma, "dp_certificate: sigma");
  if (!(gs1_value >= 0.0)) throw ParameterError("dp_certificate: gs1 < 0");
  CheckNeighbors(x1, x2);
  return 2.0 * gs1_value / (sigma * MinAbsResponse(removed, x1, x2));
}

double nearest_rank_quantile(std::vector<double> values, double delta) {
  if (values.empty()) throw ParameterError("quantile of an empty sample");
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::ptrdiff_t>(std::ceil((1.0 - delta) * n)) - 1;
  rank = std::clamp<std::ptrdiff_t>(rank, 0, std::ssize(values) - 1);
  std::nth_element(values.begin(), values.begin() + rank, values.end());
  return values[static_cast<std::size_t>(rank)];
}

ClosenessEstimate closeness_estimate(const PairSampler& sample, std::size_t m,
                                     std::size_t trials,
                                     const ClosenessSpec& spec,
                                     const RngStream& stream) {
  if (trials == 0) throw ParameterError("closeness_estimate: trials = 0");
  if (m == 0) throw ParameterError("closeness_estimate: m = 0");
  spec.validate();
  ClosenessEstimate est;
  est.errors.reserve(trials);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto [g, h] = sample(stream.child(t));
    if (g.dim() != h.dim()) throw ShapeError("closeness_estimate: g/h dims");
    const double err = inv_sqrt_m * norms(g - h).l2;
    est.errors.push_back(err);
    sum += err;
  }
  est.mean_err = sum / static_cast<double>(trials);
  est.q_err = nearest_rank_quantile(est.errors, spec.delta_ap);
  est.satisfied = est.q_err <= spec.eps_ap;
  return est;
}

ClosenessEstimate closeness_estimate(const OutputSampler& g,
                                     const OutputSampler& h, std::size_t m,
                                     std::size_t trials,
                                     const ClosenessSpec& spec,
                                     const RngStream& stream) {
  return closeness_estimate(
      [&](const RngStream& s) { return std::make_pair(g(s), h(s)); }, m,
      trials, spec, stream);
}

}  // namespace prunepriv
