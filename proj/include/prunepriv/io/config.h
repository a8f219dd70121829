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

// Experiment configuration: one JSON document whose top-level sections map
// to commands. Every section is checked against a fixed key set before any
// work starts; unknown keys and ill-typed values raise UsageError.

#ifndef PRUNEPRIV_IO_CONFIG_H_
#define PRUNEPRIV_IO_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "prunepriv/closeness_grid.h"
#include "prunepriv/inversion.h"
#include "prunepriv/leakage.h"
#include "prunepriv/lemma_verify.h"
#include "prunepriv/network.h"

namespace prunepriv {

using Json = nlohmann::json;

// Reads a JSON object field by field and remembers which keys were used.
class ConfigReader {
 public:
  ConfigReader(const Json& node, std::string path);

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      Fail(key, e.what());
    }
  }
  bool has(const std::string& key) const { return node_.contains(key); }
  // Sub-reader for an object-valued key; an absent key reads as {}.
  ConfigReader section(const std::string& key);
  // Throws UsageError naming every key that was never requested.
  void finish() const;

 private:
  [[noreturn]] void Fail(const std::string& key, const std::string& why) const;

  Json node_;
  std::string path_;
  std::set<std::string> seen_;
};

Json load_config_file(const std::filesystem::path& path);

// Applies "a.b.c=value" to `root`. The value is parsed as JSON when it
// parses, otherwise stored as a string.
void apply_override(Json& root, const std::string& assignment);

struct DatasetSection {
  std::size_t train_per_class = 60;
  std::size_t test_per_class = 30;
  double noise = 0.1;
  std::size_t pool_factor = 1;
};

struct DataSource {
  // Either both IDX paths are set, or synthetic digits are generated.
  std::string train_images, train_labels, test_images, test_labels;
  DatasetSection synthetic;
};

struct PruneSection {
  std::string model;
  double sparsity = 0.5;
};

struct InvertSection {
  std::string model;
  std::string target_model;  // release model; empty -> same as model
  std::size_t layer = 0;
  std::string image;         // PGM path; empty -> synthetic digit
  std::size_t digit = 0;
  double release_noise = 0.0;  // Laplace scale added to the release
  InversionConfig inversion;
};

struct MinimalMSection {
  std::vector<double> targets{0.05, 0.01};
};

struct DpCertSection {
  std::size_t m = 100;
  std::size_t d = 100;
  double sigma_a_scale = 1.0;
  double sparsity = 0.5;
  PrivacyBudget budget{0.5, 0.1};
  CalibrationVariant variant = CalibrationVariant::kPositiveX;
  std::size_t trials = 20;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out = "out";
  DataSource data;
  TrainConfig train;
  PruneSection prune;
  GridConfig grid;
  MinimalMSection minimal_m;
  InvertSection invert;
  LeakageConfig leakage;
  DpCertSection dp_cert;
  VerifyConfig verify;
};

// Parses and validates the whole tree. Streams are derived from `seed`:
// train child(1), grid child(2), invert child(3), leakage child(4),
// dp-cert child(5), verify child(6), dataset child(7).
ExperimentConfig parse_experiment_config(const Json& root);

}  // namespace prunepriv

#endif  // PRUNEPRIV_IO_CONFIG_H_
