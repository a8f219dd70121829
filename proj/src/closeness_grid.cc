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

#include "prunepriv/closeness_grid.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <sstream>

#include "prunepriv/core/errors.h"
#include "prunepriv/core/format.h"
#include "prunepriv/core/parallel.h"
#include "prunepriv/core/sampling.h"
#include "prunepriv/pruning.h"

namespace prunepriv {
namespace {

std::vector<const GridCellResult*> Row(const std::vector<GridCellResult>& cells,
                                       double k) {
  std::vector<const GridCellResult*> row;
  for (const GridCellResult& c : cells) {
    if (c.k == k) row.push_back(&c);
  }
  std::stable_sort(row.begin(), row.end(),
                   [](const auto* a, const auto* b) { return a->m < b->m; });
  return row;
}

}  // namespace

void GridConfig::validate() const {
  if (k_list.empty() || m_list.empty()) {
    throw ParameterError("GridConfig: k_list and m_list must be nonempty");
  }
  for (double k : k_list) {
    if (!(k >= 0.0 && k <= 1.0)) {
      throw ParameterError("GridConfig: sparsity outside [0, 1]");
    }
  }
  for (std::size_t m : m_list) {
    if (m == 0) throw ParameterError("GridConfig: width m must be >= 1");
  }
  if (d == 0) throw ParameterError("GridConfig: d must be >= 1");
  if (trials == 0) throw ParameterError("GridConfig: trials must be >= 1");
  if (!(sigma_a_scale > 0.0) || !std::isfinite(sigma_a_scale)) {
    throw ParameterError("GridConfig: sigma_a_scale must be > 0");
  }
  budget.validate();
  spec.validate();
}

RngStream cell_stream(const RngStream& base, double k, std::size_t m) {
  return base.child(std::bit_cast<std::uint64_t>(k), m);
}

GridCellResult run_cell(double k, std::size_t m, const GridConfig& cfg,
                        const RngStream& cell) {
  if (!(k >= 0.0 && k <= 1.0)) throw ParameterError("run_cell: k not in [0,1]");
  if (m == 0) throw ParameterError("run_cell: m must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const double sigma_a = cfg.sigma_a(m);
  const double sigma_bound = calibrate_sigma(
      cfg.budget, gs1_bound(m, cfg.d, sigma_a, cfg.budget.delta_dp), sigma_a,
      m, cfg.variant);

  auto sample = [&](const RngStream& trial) {
    const DenseMatrix a =
        sample_gaussian_matrix(m, cfg.d, sigma_a, trial.child(0));
    const DenseVector x = sample_unit_folded_gaussian(cfg.d, trial.child(1));
    const PrunedLayer p = prune_to_sparsity(a, k);
    const double sigma =
        cfg.gs1_mode == Gs1Mode::kBound
            ? sigma_bound
            : calibrate_sigma(cfg.budget, gs1_linear_sup(a), sigma_a, m,
                              cfg.variant);
    DenseVector g = relu(matvec(p.pruned, x));
    DenseVector h = relu(matvec(a, x)) +
                    pruning_noise(p.removed_mass, x, sigma, trial.child(2));
    return std::make_pair(std::move(g), std::move(h));
  };
  const ClosenessEstimate est =
      closeness_estimate(sample, m, cfg.trials, cfg.spec, cell);

  GridCellResult r;
  r.k = k;
  r.m = m;
  r.mean_err = est.mean_err;
  r.quantile_err = est.q_err;
  r.satisfied = est.satisfied;
  r.trials = cfg.trials;
  r.sigma = sigma_bound;
  r.wall_seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return r;
}

std::vector<GridCellResult> run_grid(const GridConfig& cfg) {
  cfg.validate();
  const std::size_t nm = cfg.m_list.size();
  std::vector<GridCellResult> out(cfg.k_list.size() * nm);
  // Largest cells first so the tail of the schedule is short.
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cfg.m_list[a % nm] > cfg.m_list[b % nm];
  });
  parallel_for(order.size(), cfg.jobs, [&](std::size_t i) {
    const std::size_t slot = order[i];
    const double k = cfg.k_list[slot / nm];
    const std::size_t m = cfg.m_list[slot % nm];
    out[slot] = run_cell(k, m, cfg, cell_stream(cfg.stream, k, m));
  });
  return out;
}

std::optional<std::size_t> minimal_m(double k, double eps_ap_target,
                                     const std::vector<std::size_t>& candidates,
                                     const GridConfig& cfg) {
  for (std::size_t m : candidates) {
    const GridCellResult r = run_cell(k, m, cfg, cell_stream(cfg.stream, k, m));
    if (r.mean_err <= eps_ap_target) return m;
  }
  return std::nullopt;
}

std::optional<std::size_t> minimal_m(const std::vector<GridCellResult>& cells,
                                     double k, double eps_ap_target) {
  for (const GridCellResult* c : Row(cells, k)) {
    if (c->mean_err <= eps_ap_target) return c->m;
  }
  return std::nullopt;
}

std::optional<double> loglog_slope(const std::vector<GridCellResult>& cells,
                                   double k) {
  std::vector<double> xs, ys;
  for (const GridCellResult* c : Row(cells, k)) {
    if (c->mean_err > 0.0) {
      xs.push_back(std::log(static_cast<double>(c->m)));
      ys.push_back(std::log(c->mean_err));
    }
  }
  if (xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

std::size_t adjacent_inversions(const std::vector<GridCellResult>& cells,
                                double k) {
  const auto row = Row(cells, k);
  std::size_t count = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i]->mean_err > row[i - 1]->mean_err) ++count;
  }
  return count;
}

std::string grid_to_csv(const std::vector<GridCellResult>& cells,
                        std::uint64_t seed) {
  std::ostringstream out;
  out << "k,m,mean_err,q_err,satisfied,trials,seed\n";
  for (const GridCellResult& c : cells) {
    out << format_real(c.k) << ',' << c.m << ',' << format_real(c.mean_err)
        << ',' << format_real(c.quantile_err) << ',' << (c.satisfied ? 1 : 0)
        << ',' << c.trials << ',' << seed << '\n';
  }
  return out.str();
}

}  // namespace prunepriv
