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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "prunepriv/cli/commands.h"
#include "prunepriv/closeness_grid.h"
#include "prunepriv/core/errors.h"
#include "prunepriv/inversion.h"
#include "prunepriv/lemma_verify.h"
#include "prunepriv/metrics.h"
#include "prunepriv/privacy.h"
#include "prunepriv/pruning.h"

namespace py = pybind11;

namespace prunepriv {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix ToMatrix(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto* p = a.data();
  return DenseMatrix(a.shape(0), a.shape(1),
                     std::vector<double>(p, p + a.size()));
}

DenseVector ToVector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return DenseVector(std::vector<double>(a.data(), a.data() + a.size()));
}

GrayImage ToImage(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D image (h, w)");
  return GrayImage(a.shape(1), a.shape(0),
                   std::vector<double>(a.data(), a.data() + a.size()));
}

Array FromMatrix(const DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

Array FromVector(const DenseVector& v) {
  Array out(v.dim());
  std::copy(v.values().begin(), v.values().end(), out.mutable_data());
  return out;
}

py::dict LayerDict(const PrunedLayer& p) {
  py::dict d;
  d["pruned"] = FromMatrix(p.pruned);
  d["removed_mass"] = FromMatrix(p.removed_mass);
  d["threshold"] = p.threshold;
  d["achieved_sparsity"] = p.achieved_sparsity;
  return d;
}

CalibrationVariant Variant(const std::string& name) {
  if (name == "positive-x") return CalibrationVariant::kPositiveX;
  if (name == "general-x") return CalibrationVariant::kGeneralX;
  throw py::value_error("variant must be 'positive-x' or 'general-x'");
}

py::list RunGrid(std::vector<double> k_list, std::vector<std::size_t> m_list,
                 std::size_t d, std::size_t trials, std::uint64_t seed,
                 double eps_dp, double delta_dp, std::size_t jobs) {
  GridConfig cfg;
  cfg.k_list = std::move(k_list);
  cfg.m_list = std::move(m_list);
  cfg.d = d;
  cfg.trials = trials;
  cfg.budget = {eps_dp, delta_dp};
  cfg.stream = RngStream(seed).child(2);
  cfg.jobs = jobs;
  std::vector<GridCellResult> cells;
  {
    py::gil_scoped_release release;
    cells = run_grid(cfg);
  }
  py::list out;
  for (const auto& c : cells) {
    py::dict row;
    row["k"] = c.k;
    row["m"] = c.m;
    row["mean_err"] = c.mean_err;
    row["q_err"] = c.quantile_err;
    row["satisfied"] = c.satisfied;
    row["trials"] = c.trials;
    row["sigma"] = c.sigma;
    out.append(row);
  }
  return out;
}

py::list RunChecks(std::uint64_t seed, std::size_t jobs) {
  std::vector<CheckReport> reports;
  {
    py::gil_scoped_release release;
    reports = run_all_checks(VerifyConfig{}, RngStream(seed).child(6), jobs);
  }
  py::list out;
  for (const auto& r : reports) {
    py::dict row;
    row["check"] = r.name;
    row["samples"] = r.samples;
    row["statistic"] = r.statistic;
    row["claimed"] = r.claimed;
    row["tolerance"] = r.tolerance;
    row["pass"] = r.pass;
    row["note"] = r.note;
    py::dict details;
    for (const auto& [k, v] : r.details) details[py::str(k)] = v;
    row["details"] = details;
    out.append(row);
  }
  return out;
}

py::tuple RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "prunepriv");
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_command(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace prunepriv

PYBIND11_MODULE(_core, m) {
  using namespace prunepriv;
  m.doc() = "Magnitude pruning as a privacy mechanism: core operations.";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);

  m.def("threshold_prune",
        [](const Array& w, double a) { return LayerDict(threshold_prune(ToMatrix(w), a)); },
        py::arg("w"), py::arg("a"));
  m.def("prune_to_sparsity",
        [](const Array& w, double k) { return LayerDict(prune_to_sparsity(ToMatrix(w), k)); },
        py::arg("w"), py::arg("k"));
  m.def("gradual_sparsity",
        [](std::int64_t t, double k0, double kT, std::int64_t t0, std::int64_t n,
           std::int64_t dt) { return gradual_sparsity(t, PruneSchedule{k0, kT, t0, n, dt}); },
        py::arg("t"), py::arg("k0"), py::arg("kT"), py::arg("t0"), py::arg("n"),
        py::arg("dt"));

  m.def("gs1_bound", &gs1_bound, py::arg("m"), py::arg("d"), py::arg("sigma_a"),
        py::arg("delta"));
  m.def("gs2_bound", &gs2_bound, py::arg("m"), py::arg("d"), py::arg("sigma_a"),
        py::arg("delta"));
  m.def("gs1_linear_sup", [](const Array& a) { return gs1_linear_sup(ToMatrix(a)); });
  m.def("gs2_linear_sup", [](const Array& a) { return gs2_linear_sup(ToMatrix(a)); });
  m.def("calibrate_sigma",
        [](double eps_dp, double delta_dp, double gs1, double sigma_a, std::size_t m,
           const std::string& variant) {
          return calibrate_sigma({eps_dp, delta_dp}, gs1, sigma_a, m, Variant(variant));
        },
        py::arg("eps_dp"), py::arg("delta_dp"), py::arg("gs1"), py::arg("sigma_a"),
        py::arg("m"), py::arg("variant") = "positive-x");
  m.def("pruning_noise",
        [](const Array& removed, const Array& x, double sigma, std::uint64_t seed) {
          return FromVector(pruning_noise(ToMatrix(removed), ToVector(x), sigma,
                                          RngStream(seed)));
        },
        py::arg("removed"), py::arg("x"), py::arg("sigma"), py::arg("seed") = 0);

  m.def("run_grid", &RunGrid, py::arg("k_list"), py::arg("m_list"),
        py::arg("d") = 100, py::arg("trials") = 50, py::arg("seed") = 0,
        py::arg("eps_dp") = 0.5, py::arg("delta_dp") = 0.1, py::arg("jobs") = 1);

  m.def("ssim", [](const Array& x, const Array& y) {
    return ssim_normalized(ToImage(x), ToImage(y));
  });
  m.def("phash", [](const Array& x) { return phash(ToImage(x)); });
  m.def("phash_similarity", [](const Array& x, const Array& y) {
    return phash_similarity(ToImage(x), ToImage(y));
  });
  m.def("total_variation", [](const Array& x) { return total_variation(ToImage(x)); });

  m.def("run_checks", &RunChecks, py::arg("seed") = 0, py::arg("jobs") = 1);
  m.def("run_cli", &RunCli, py::arg("args"),
        "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
