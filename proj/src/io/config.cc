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

#include "prunepriv/io/config.h"

#include <fstream>
#include <sstream>

#include "prunepriv/core/errors.h"

namespace prunepriv {
namespace {

template <typename Enum>
Enum ParseEnum(ConfigReader& r, const std::string& key, Enum fallback,
               std::initializer_list<std::pair<const char*, Enum>> names) {
  std::string text;
  r.get(key, text);
  if (text.empty()) return fallback;
  std::string options;
  for (const auto& [name, value] : names) {
    if (text == name) return value;
    options += std::string(options.empty() ? "" : ", ") + name;
  }
  throw UsageError("config: '" + key + "' must be one of {" + options +
                   "}, got '" + text + "'");
}

void ReadInversion(ConfigReader r, InversionConfig& inv) {
  r.get("lambda", inv.lambda);
  r.get("max_steps", inv.max_steps);
  r.get("step_size", inv.step_size);
  r.get("tolerance", inv.tolerance);
  r.get("tau", inv.tau);
  inv.init = ParseEnum(r, "init", inv.init,
                       {{"uniform-random", InversionInit::kUniformRandom},
                        {"mid-gray", InversionInit::kMidGray}});
  r.finish();
}

void ReadTrain(ConfigReader r, TrainConfig& t) {
  r.get("hidden", t.hidden);
  r.get("eta", t.eta);
  r.get("t_train", t.t_train);
  r.get("t_prune", t.t_prune);
  r.get("batch_size", t.batch_size);
  r.get("init_scale", t.init_scale);
  r.get("classes", t.classes);
  r.get("k0", t.schedule.k0);
  r.get("kT", t.schedule.kT);
  r.get("t0", t.schedule.t0);
  r.get("n", t.schedule.n);
  r.get("dt", t.schedule.dt);
  r.finish();
}

void ReadDataset(ConfigReader r, DatasetSection& s) {
  r.get("train_per_class", s.train_per_class);
  r.get("test_per_class", s.test_per_class);
  r.get("noise", s.noise);
  r.get("pool_factor", s.pool_factor);
  r.finish();
}

void ReadGrid(ConfigReader r, GridConfig& g) {
  r.get("k_list", g.k_list);
  r.get("m_list", g.m_list);
  r.get("d", g.d);
  r.get("sigma_a_scale", g.sigma_a_scale);
  r.get("eps_dp", g.budget.eps_dp);
  r.get("delta_dp", g.budget.delta_dp);
  r.get("eps_ap", g.spec.eps_ap);
  r.get("delta_ap", g.spec.delta_ap);
  r.get("trials", g.trials);
  g.gs1_mode = ParseEnum(r, "gs1_mode", g.gs1_mode,
                         {{"bound", Gs1Mode::kBound}, {"exact", Gs1Mode::kExact}});
  g.variant = ParseEnum(r, "variant", g.variant,
                        {{"positive-x", CalibrationVariant::kPositiveX},
                         {"general-x", CalibrationVariant::kGeneralX}});
  r.finish();
}

void ReadLeakage(ConfigReader r, LeakageConfig& l) {
  r.get("train_per_class", l.train_per_class);
  r.get("test_per_class", l.test_per_class);
  r.get("pixel_noise", l.pixel_noise);
  r.get("hidden", l.hidden);
  r.get("eta", l.eta);
  r.get("t_train", l.t_train);
  r.get("t_prune", l.t_prune);
  r.get("prune_steps", l.prune_steps);
  r.get("sparsity", l.sparsity);
  r.get("images", l.images);
  r.get("accuracy_tolerance", l.accuracy_tolerance);
  r.get("accuracy_repeats", l.accuracy_repeats);
  r.get("max_search_iterations", l.max_search_iterations);
  ReadInversion(r.section("inversion"), l.inversion);
  r.finish();
}

void ReadVerify(ConfigReader r, VerifyConfig& v) {
  r.get("trunc_a", v.trunc_a);
  r.get("trunc_samples", v.trunc_samples);
  std::vector<double> alpha(v.anti_alpha.data());
  r.get("anti_alpha", alpha);
  v.anti_alpha = DenseVector(alpha);
  r.get("anti_a", v.anti_a);
  r.get("anti_grid", v.anti_grid);
  r.get("anti_samples", v.anti_samples);
  r.get("anti_floor", v.anti_floor);
  r.get("folded_a", v.folded_a);
  r.get("folded_sigma_a", v.folded_sigma_a);
  r.get("folded_m", v.folded_m);
  r.get("folded_d", v.folded_d);
  r.get("folded_delta", v.folded_delta);
  r.get("folded_trials", v.folded_trials);
  r.get("inner_a", v.inner_a);
  r.get("inner_sigma", v.inner_sigma);
  r.get("inner_d", v.inner_d);
  r.get("inner_delta", v.inner_delta);
  r.get("inner_trials", v.inner_trials);
  r.get("sens_m", v.sens_m);
  r.get("sens_d", v.sens_d);
  r.get("sens_sigma_a", v.sens_sigma_a);
  r.get("sens_delta", v.sens_delta);
  r.get("sens_trials", v.sens_trials);
  r.get("noise_m", v.noise_m);
  r.get("noise_d", v.noise_d);
  r.get("noise_k", v.noise_k);
  r.get("noise_sigma", v.noise_sigma);
  r.get("noise_draws", v.noise_draws);
  r.finish();
}

}  // namespace

ConfigReader::ConfigReader(const Json& node, std::string path)
    : node_(node.is_null() ? Json::object() : node), path_(std::move(path)) {
  if (!node_.is_object()) {
    throw UsageError("config: '" + (path_.empty() ? "<root>" : path_) +
                     "' must be an object");
  }
}

ConfigReader ConfigReader::section(const std::string& key) {
  seen_.insert(key);
  const std::string child = path_.empty() ? key : path_ + "." + key;
  return ConfigReader(node_.contains(key) ? node_.at(key) : Json::object(),
                      child);
}

void ConfigReader::finish() const {
  std::string unknown;
  for (const auto& [key, value] : node_.items()) {
    if (!seen_.count(key)) {
      unknown += (unknown.empty() ? "" : ", ") +
                 (path_.empty() ? key : path_ + "." + key);
    }
  }
  if (!unknown.empty()) throw UsageError("config: unknown key(s): " + unknown);
}

void ConfigReader::Fail(const std::string& key, const std::string& why) const {
  throw UsageError("config: bad value for '" +
                   (path_.empty() ? key : path_ + "." + key) + "': " + why);
}

Json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config " + path.string() + ": " + e.what());
  }
}

void apply_override(Json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }
  Json* node = &root;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->is_object()) *node = Json::object();
    node = &(*node)[path[i]];
  }
  if (!node->is_object()) *node = Json::object();
  (*node)[path.back()] = value;
}

ExperimentConfig parse_experiment_config(const Json& root) {
  ExperimentConfig cfg;
  ConfigReader r(root, "");
  r.get("seed", cfg.seed);
  r.get("jobs", cfg.jobs);
  r.get("out", cfg.out);

  cfg.train = leakage_train_config(cfg.leakage, cfg.leakage.sparsity);

  ConfigReader data = r.section("data");
  data.get("train_images", cfg.data.train_images);
  data.get("train_labels", cfg.data.train_labels);
  data.get("test_images", cfg.data.test_images);
  data.get("test_labels", cfg.data.test_labels);
  ReadDataset(data.section("synthetic"), cfg.data.synthetic);
  data.finish();

  ReadTrain(r.section("train"), cfg.train);

  ConfigReader prune = r.section("prune");
  prune.get("model", cfg.prune.model);
  prune.get("sparsity", cfg.prune.sparsity);
  prune.finish();

  ReadGrid(r.section("grid"), cfg.grid);

  ConfigReader mm = r.section("minimal_m");
  mm.get("targets", cfg.minimal_m.targets);
  mm.finish();

  ConfigReader inv = r.section("invert");
  inv.get("model", cfg.invert.model);
  inv.get("target_model", cfg.invert.target_model);
  inv.get("layer", cfg.invert.layer);
  inv.get("image", cfg.invert.image);
  inv.get("digit", cfg.invert.digit);
  inv.get("release_noise", cfg.invert.release_noise);
  ReadInversion(inv.section("inversion"), cfg.invert.inversion);
  inv.finish();

  ReadLeakage(r.section("leakage"), cfg.leakage);

  ConfigReader dp = r.section("dp_cert");
  dp.get("m", cfg.dp_cert.m);
  dp.get("d", cfg.dp_cert.d);
  dp.get("sigma_a_scale", cfg.dp_cert.sigma_a_scale);
  dp.get("sparsity", cfg.dp_cert.sparsity);
  dp.get("eps_dp", cfg.dp_cert.budget.eps_dp);
  dp.get("delta_dp", cfg.dp_cert.budget.delta_dp);
  dp.get("trials", cfg.dp_cert.trials);
  cfg.dp_cert.variant =
      ParseEnum(dp, "variant", cfg.dp_cert.variant,
                {{"positive-x", CalibrationVariant::kPositiveX},
                 {"general-x", CalibrationVariant::kGeneralX}});
  dp.finish();

  ReadVerify(r.section("verify"), cfg.verify);
  r.finish();

  const RngStream base(cfg.seed);
  cfg.train.stream = base.child(1);
  cfg.grid.stream = base.child(2);
  cfg.grid.jobs = cfg.jobs;
  cfg.invert.inversion.stream = base.child(3);
  cfg.leakage.stream = base.child(4);
  cfg.leakage.jobs = cfg.jobs;

  try {
    cfg.train.validate();
    cfg.grid.validate();
    cfg.invert.inversion.validate();
    cfg.leakage.validate();
    cfg.dp_cert.budget.validate();
    if (cfg.jobs == 0) throw ParameterError("jobs must be >= 1");
    if (!(cfg.prune.sparsity >= 0.0 && cfg.prune.sparsity <= 1.0)) {
      throw ParameterError("prune.sparsity outside [0, 1]");
    }
    if (!(cfg.dp_cert.sparsity >= 0.0 && cfg.dp_cert.sparsity <= 1.0) ||
        cfg.dp_cert.m == 0 || cfg.dp_cert.d == 0 || cfg.dp_cert.trials == 0) {
      throw ParameterError("dp_cert: bad m, d, trials or sparsity");
    }
    if (cfg.data.synthetic.pool_factor == 0) {
      throw ParameterError("data.synthetic.pool_factor must be >= 1");
    }
  } catch (const ParameterError& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace prunepriv
