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

#include "prunepriv/lemma_verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "prunepriv/core/errors.h"
#include "prunepriv/core/format.h"
#include "prunepriv/core/parallel.h"
#include "prunepriv/core/sampling.h"
#include "prunepriv/privacy.h"
#include "prunepriv/pruning.h"

namespace prunepriv {
namespace {

double BinomialSe(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double Truncate(double v, double a) { return std::abs(v) <= a ? v : 0.0; }

}  // namespace

double CheckReport::detail(const std::string& key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

CheckReport check_truncated_variance(double a, std::size_t samples,
                                     const RngStream& stream) {
  if (!(a > 0.0)) throw ParameterError("check_truncated_variance: a <= 0");
  if (samples < 100000) {
    throw ParameterError("check_truncated_variance: need >= 1e5 samples");
  }
  RandomEngine eng = stream.engine();
  double s1 = 0.0, s2 = 0.0;  // over retained samples
  std::size_t kept = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = eng.normal();
    if (std::abs(v) <= a) {
      s1 += v;
      s2 += v * v;
      ++kept;
    }
  }
  const double n = static_cast<double>(samples);
  const double kn = static_cast<double>(kept);
  const double conditional =
      kept > 1 ? (s2 - s1 * s1 / kn) / (kn - 1.0) : 0.0;
  const double zero_padded = (s2 - s1 * s1 / n) / (n - 1.0);
  const double claimed =
      1.0 - std::sqrt(2.0 / std::numbers::pi) * a * std::exp(-a * a / 2.0) /
                std::erf(a / std::numbers::sqrt2);
  const double tol = 0.01;
  const bool cond_ok = std::abs(conditional - claimed) <= tol * claimed;
  const bool pad_ok = std::abs(zero_padded - claimed) <= tol * claimed;

  CheckReport r;
  r.name = "truncated_variance";
  r.samples = samples;
  r.statistic = conditional;
  r.claimed = claimed;
  r.tolerance = tol;
  r.pass = cond_ok || pad_ok;
  r.note = cond_ok && pad_ok ? "both"
           : cond_ok         ? "conditional"
           : pad_ok          ? "zero-padded"
                             : "none";
  r.details = {{"conditional", conditional},
               {"zero_padded", zero_padded},
               {"conditional_match", cond_ok ? 1.0 : 0.0},
               {"zero_padded_match", pad_ok ? 1.0 : 0.0},
               {"erf_factor", std::erf(a / std::numbers::sqrt2)}};
  return r;
}

CheckReport check_anticoncentration(const DenseVector& alpha, double a,
                                    std::vector<double> delta_grid,
                                    std::size_t samples,
                                    const RngStream& stream, double floor) {
  const double alpha_norm = norms(alpha).l2;
  if (!(alpha_norm > 0.0)) {
    throw ParameterError("check_anticoncentration: ||alpha||_2 must be > 0");
  }
  if (!(a > 0.0)) throw ParameterError("check_anticoncentration: a <= 0");
  if (delta_grid.empty() || samples == 0) {
    throw ParameterError("check_anticoncentration: empty grid or no samples");
  }
  for (double d : delta_grid) {
    if (!(d > 0.0)) throw ParameterError("check_anticoncentration: delta <= 0");
  }
  std::sort(delta_grid.begin(), delta_grid.end());

  RandomEngine eng = stream.engine();
  std::vector<double> magnitudes(samples);
  for (double& out : magnitudes) {
    double p = 0.0;
    for (double w : alpha.values()) p += w * Truncate(eng.normal(), a);
    out = std::abs(p);
  }
  std::sort(magnitudes.begin(), magnitudes.end());

  CheckReport r;
  r.name = "anticoncentration";
  r.samples = samples;
  r.claimed = floor;
  r.statistic = INFINITY;
  bool slack_ok = true;
  bool monotone = true;
  double prev = -1.0;
  for (double delta : delta_grid) {
    const double thr = std::min(a, 0.1) * delta * alpha_norm;
    const auto hits = std::upper_bound(magnitudes.begin(), magnitudes.end(),
                                       thr) - magnitudes.begin();
    const double prob = static_cast<double>(hits) / static_cast<double>(samples);
    const double ratio = prob / delta;
    const double slack = 3.0 * BinomialSe(prob, samples) / delta;
    if (ratio + slack < floor) slack_ok = false;
    if (prob < prev) monotone = false;
    prev = prob;
    r.statistic = std::min(r.statistic, ratio);
    r.details.emplace_back("prob@" + format_real(delta), prob);
  }
  r.tolerance = 3.0;  // standard errors
  r.pass = slack_ok && monotone;
  r.note = monotone ? "monotone" : "non-monotone";
  return r;
}

CheckReport check_folded_lower_bound(double a, double sigma_a, std::size_t m,
                                     std::size_t d, double delta,
                                     std::size_t trials,
                                     const RngStream& stream, DenseVector x) {
  if (m == 0 || d == 0 || trials == 0) {
    throw ParameterError("check_folded_lower_bound: m, d, trials >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("check_folded_lower_bound: delta not in (0, 1)");
  }
  if (x.empty()) x = DenseVector(d, 1.0 / static_cast<double>(d));
  if (x.dim() != d) throw ShapeError("check_folded_lower_bound: x dimension");

  CheckReport r;
  r.name = "folded_lower_bound";
  r.samples = trials;
  r.claimed = 1.0 - delta;
  r.tolerance = 3.0 * BinomialSe(delta, trials);
  if (!(sigma_a > 0.0)) {
    r.note = "precondition unmet (sigma_a <= 0)";
    return r;
  }
  const bool precondition =
      a / sigma_a >= 20.0 * std::log(static_cast<double>(m) / delta);
  const double bound = 0.02 * a * a / sigma_a;

  RandomEngine eng = stream.engine();
  std::size_t events = 0;
  double min_resp = INFINITY, sum_resp = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    bool all = true;
    for (std::size_t i = 0; i < m; ++i) {
      double resp = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double y = eng.normal(0.0, sigma_a);
        if (y >= 0.0 && y <= a) resp += y * x[j];
      }
      min_resp = std::min(min_resp, resp);
      sum_resp += resp;
      if (!(resp >= bound)) all = false;
    }
    if (all) ++events;
  }
  double xsum = 0.0;
  for (double v : x.values()) xsum += v;
  const double expected = sigma_a / std::sqrt(2.0 * std::numbers::pi) *
                          (1.0 - std::exp(-a * a / (2.0 * sigma_a * sigma_a))) *
                          xsum;
  r.statistic = static_cast<double>(events) / static_cast<double>(trials);
  r.pass = r.statistic >= r.claimed - r.tolerance;
  r.note = precondition ? "precondition met" : "precondition unmet";
  r.details = {{"bound", bound},
               {"min_response", min_resp},
               {"mean_response",
                sum_resp / static_cast<double>(trials * m)},
               {"expected_response", expected},
               {"precondition", precondition ? 1.0 : 0.0}};
  return r;
}

CheckReport check_inner_product(double a, double sigma, std::size_t d,
                                const DenseVector& x, double delta,
                                std::size_t trials, const RngStream& stream) {
  if (!(a > 0.0) || !(sigma > 0.0)) {
    throw ParameterError("check_inner_product: a, sigma must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("check_inner_product: delta not in (0, 1)");
  }
  if (trials == 0) throw ParameterError("check_inner_product: trials = 0");
  if (x.dim() != d) throw ShapeError("check_inner_product: x dimension");
  const double thr = 10.0 * norms(x).l2 * a * (std::sqrt(a / sigma) + 1.0) *
                     std::log(1.0 / delta);
  RandomEngine eng = stream.engine();
  std::size_t tail = 0;
  double max_abs = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    double ip = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      ip += Truncate(eng.normal(0.0, sigma), a) * x[j];
    }
    max_abs = std::max(max_abs, std::abs(ip));
    if (ip != 0.0 && std::abs(ip) >= thr) ++tail;
  }
  CheckReport r;
  r.name = "inner_product";
  r.samples = trials;
  r.statistic = static_cast<double>(tail) / static_cast<double>(trials);
  r.claimed = delta;
  r.tolerance = 3.0 * BinomialSe(delta, trials);
  r.pass = r.statistic <= delta + r.tolerance;
  r.details = {{"threshold", thr}, {"max_abs_inner", max_abs}};
  return r;
}

CheckReport check_sensitivity_bounds(std::size_t m, std::size_t d,
                                     double sigma_a, double delta,
                                     std::size_t trials,
                                     const RngStream& stream) {
  if (trials == 0) throw ParameterError("check_sensitivity_bounds: trials = 0");
  const double b1 = gs1_bound(m, d, sigma_a, delta);
  const double b2 = gs2_bound(m, d, sigma_a, delta);
  std::size_t v1 = 0, v2 = 0;
  std::vector<double> ratio1, ratio2;
  for (std::size_t t = 0; t < trials; ++t) {
    const DenseMatrix a = sample_gaussian_matrix(m, d, sigma_a, stream.child(t));
    const double e1 = gs1_linear_sup(a);
    const double e2 = gs2_linear_sup(a);
    if (e1 > b1) ++v1;
    if (e2 > b2) ++v2;
    if (e1 > 0.0) ratio1.push_back(b1 / e1);
    if (e2 > 0.0) ratio2.push_back(b2 / e2);
  }
  const double n = static_cast<double>(trials);
  CheckReport r;
  r.name = "sensitivity_bounds";
  r.samples = trials;
  r.statistic = std::max(v1, v2) / n;
  r.claimed = delta;
  r.tolerance = 3.0 * BinomialSe(delta, trials);
  r.pass = r.statistic <= delta + r.tolerance;
  r.details = {{"gs1_bound", b1},
               {"gs2_bound", b2},
               {"gs1_violation_rate", static_cast<double>(v1) / n},
               {"gs2_violation_rate", static_cast<double>(v2) / n}};
  auto add_ratio = [&](const char* key, std::vector<double>& v) {
    if (v.empty()) return;
    std::sort(v.begin(), v.end());
    r.details.emplace_back(std::string(key) + "_min", v.front());
    r.details.emplace_back(std::string(key) + "_median", v[v.size() / 2]);
  };
  add_ratio("gs1_ratio", ratio1);
  add_ratio("gs2_ratio", ratio2);
  return r;
}

CheckReport check_noise_second_moment(std::size_t m, std::size_t d,
                                      double sigma_a, double k, double sigma,
                                      std::size_t draws,
                                      const RngStream& stream,
                                      double rel_tol) {
  if (draws == 0) throw ParameterError("check_noise_second_moment: draws = 0");
  const DenseMatrix a = sample_gaussian_matrix(m, d, sigma_a, stream.child(0));
  const DenseVector x = sample_unit_folded_gaussian(d, stream.child(1));
  const PrunedLayer p = prune_to_sparsity(a, k);
  const DenseVector mean = matvec(p.removed_mass, x);
  const double md = static_cast<double>(m);
  const double claimed = 2.0 * sigma * sigma / md * norms(mean).l2 *
                         norms(mean).l2;
  const RngStream noise = stream.child(2);
  double sum = 0.0;
  for (std::size_t t = 0; t < draws; ++t) {
    const DenseVector e = pruning_noise(p.removed_mass, x, sigma, noise.child(t));
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) sq += (e[i] - mean[i]) * (e[i] - mean[i]);
    sum += sq / md;
  }
  CheckReport r;
  r.name = "noise_second_moment";
  r.samples = draws;
  r.statistic = sum / static_cast<double>(draws);
  r.claimed = claimed;
  r.tolerance = rel_tol;
  r.pass = claimed > 0.0
               ? std::abs(r.statistic - claimed) <= rel_tol * claimed
               : r.statistic == 0.0;
  return r;
}

std::vector<CheckReport> run_all_checks(const VerifyConfig& cfg,
                                        const RngStream& stream,
                                        std::size_t jobs) {
  const DenseVector inner_x(cfg.inner_d,
                            1.0 / std::sqrt(static_cast<double>(cfg.inner_d)));
  std::vector<std::function<CheckReport()>> checks = {
      [&] {
        return check_truncated_variance(cfg.trunc_a, cfg.trunc_samples,
                                        stream.child(0));
      },
      [&] {
        return check_anticoncentration(cfg.anti_alpha, cfg.anti_a,
                                       cfg.anti_grid, cfg.anti_samples,
                                       stream.child(1), cfg.anti_floor);
      },
      [&] {
        return check_folded_lower_bound(
            cfg.folded_a, cfg.folded_sigma_a, cfg.folded_m, cfg.folded_d,
            cfg.folded_delta, cfg.folded_trials, stream.child(2));
      },
      [&] {
        return check_inner_product(cfg.inner_a, cfg.inner_sigma, cfg.inner_d,
                                   inner_x, cfg.inner_delta, cfg.inner_trials,
                                   stream.child(3));
      },
      [&] {
        return check_sensitivity_bounds(cfg.sens_m, cfg.sens_d,
                                        cfg.sens_sigma_a, cfg.sens_delta,
                                        cfg.sens_trials, stream.child(4));
      },
      [&] {
        return check_noise_second_moment(
            cfg.noise_m, cfg.noise_d, 1.0, cfg.noise_k, cfg.noise_sigma,
            cfg.noise_draws, stream.child(5));
      },
  };
  std::vector<CheckReport> out(checks.size());
  parallel_for(checks.size(), jobs, [&](std::size_t i) { out[i] = checks[i](); });
  return out;
}

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  out << "check,samples,statistic,claimed,tolerance,pass,note\n";
  for (const CheckReport& r : reports) {
    out << r.name << ',' << r.samples << ',' << format_real(r.statistic) << ','
        << format_real(r.claimed) << ',' << format_real(r.tolerance) << ','
        << (r.pass ? 1 : 0) << ',' << r.note << '\n';
  }
  return out.str();
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckReport& r : reports) {
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    arr.push_back({{"check", r.name},
                   {"samples", r.samples},
                   {"statistic", r.statistic},
                   {"claimed", r.claimed},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass},
                   {"note", r.note},
                   {"details", details}});
  }
  return arr.dump(2);
}

}  // namespace prunepriv
