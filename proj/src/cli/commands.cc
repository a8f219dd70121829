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

#include "prunepriv/cli/commands.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prunepriv/closeness_grid.h"
#include "prunepriv/core/errors.h"
#include "prunepriv/core/format.h"
#include "prunepriv/core/sampling.h"
#include "prunepriv/inversion.h"
#include "prunepriv/io/config.h"
#include "prunepriv/io/idx.h"
#include "prunepriv/io/synth_digits.h"
#include "prunepriv/leakage.h"
#include "prunepriv/lemma_verify.h"
#include "prunepriv/metrics.h"
#include "prunepriv/privacy.h"
#include "prunepriv/pruning.h"

namespace prunepriv {
namespace {

namespace fs = std::filesystem;
using OJson = nlohmann::ordered_json;

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
  std::string format = "csv";
  std::vector<std::string> overrides;
};

// Rows of pre-formatted cells; numeric cells are emitted bare in JSON.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return out.str();
  }

  std::string json() const {
    OJson arr = OJson::array();
    for (const auto& row : rows) {
      OJson obj = OJson::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        obj[header[i]] = Cell(row[i]);
      }
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }

  static OJson Cell(const std::string& text) {
    if (text.empty()) return nullptr;
    const OJson parsed = OJson::parse(text, nullptr, false);
    if (!parsed.is_discarded() && parsed.is_number()) return parsed;
    return text;
  }
};

class Context {
 public:
  Context(ExperimentConfig cfg, std::string format, std::ostream& out,
          std::ostream& err)
      : cfg_(std::move(cfg)), format_(std::move(format)), out_(out), err_(err) {
    fs::create_directories(cfg_.out);
  }

  const ExperimentConfig& cfg() const { return cfg_; }
  RngStream root() const { return RngStream(cfg_.seed); }

  void write(const std::string& name, const std::string& text) {
    const fs::path path = fs::path(cfg_.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw Error("write failed: " + path.string());
    out_ << "wrote " << path.string() << '\n';
  }

  // Writes `stem`.csv or `stem`.json per --format.
  void write_table(const std::string& stem, const Table& table) {
    if (format_ == "json") {
      write(stem + ".json", table.json());
    } else {
      write(stem + ".csv", table.csv());
    }
  }

  void write_json(const std::string& name, const OJson& j) {
    write(name, j.dump(2) + "\n");
  }

  // Records a file produced by a library writer.
  std::string produced(const std::string& name) {
    const std::string p = path(name);
    out_ << "wrote " << p << '\n';
    return p;
  }

  void warn(const std::string& text) { err_ << "warning: " << text << '\n'; }

  std::string path(const std::string& name) const {
    return (fs::path(cfg_.out) / name).string();
  }

 private:
  ExperimentConfig cfg_;
  std::string format_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string Str(double v) { return format_real(v); }
std::string Str(std::size_t v) { return std::to_string(v); }

OJson Summary(const MetricSummary& m) {
  return {{"mean", m.mean}, {"min", m.min}, {"max", m.max}};
}

Table LeakageTable(const LeakageReport& r) {
  Table t{{"image_id", "ssim", "phash", "infe"}, {}};
  for (const LeakageRecord& rec : r.records) {
    t.rows.push_back({Str(rec.image_id), Str(rec.ssim), Str(rec.phash),
                      std::to_string(rec.infe)});
  }
  return t;
}

LabeledDataset Pool(LabeledDataset d, std::size_t factor) {
  if (factor > 1) {
    for (GrayImage& img : d.images) img = downsample_pool(img, factor);
  }
  return d;
}

DigitSplit LoadData(const Context& ctx) {
  const DataSource& src = ctx.cfg().data;
  const bool any_idx = !src.train_images.empty() || !src.train_labels.empty() ||
                       !src.test_images.empty() || !src.test_labels.empty();
  if (any_idx) {
    if (src.train_images.empty() || src.train_labels.empty() ||
        src.test_images.empty() || src.test_labels.empty()) {
      throw UsageError("data: all four IDX paths must be given together");
    }
    return {Pool(load_idx(src.train_images, src.train_labels),
                 src.synthetic.pool_factor),
            Pool(load_idx(src.test_images, src.test_labels),
                 src.synthetic.pool_factor)};
  }
  const RngStream s = ctx.root().child(7);
  const DatasetSection& syn = src.synthetic;
  return {Pool(synth_digits(syn.train_per_class, syn.noise, s.child(0)),
               syn.pool_factor),
          Pool(synth_digits(syn.test_per_class, syn.noise, s.child(1)),
               syn.pool_factor)};
}

Mlp LoadModel(const std::string& path, const char* key) {
  if (path.empty()) throw UsageError(std::string(key) + " is required");
  return load_model(path);
}

void CmdDataset(Context& ctx) {
  const DigitSplit split = LoadData(ctx);
  write_idx(split.train, ctx.produced("train-images.idx"),
            ctx.produced("train-labels.idx"));
  write_idx(split.test, ctx.produced("test-images.idx"),
            ctx.produced("test-labels.idx"));
  ctx.write_json("dataset.json", {{"train", split.train.size()},
                                  {"test", split.test.size()},
                                  {"classes", split.train.class_count}});
}

void CmdTrain(Context& ctx) {
  const DigitSplit split = LoadData(ctx);
  const Dataset train = split.train.to_examples();
  const Dataset test = split.test.to_examples();
  const TrainResult result = sgd_mag_prune_train(train, ctx.cfg().train, &test);
  save_model(result.model, ctx.produced("model.json"));

  Table loss{{"iteration", "loss"}, {}};
  for (std::size_t i = 0; i < result.history.loss.size(); ++i) {
    loss.rows.push_back({Str(i), Str(result.history.loss[i])});
  }
  ctx.write_table("train_loss", loss);

  Table sparsity{{"iteration", "target", "layer", "achieved"}, {}};
  for (const SparsityCheckpoint& c : result.history.sparsity) {
    for (std::size_t l = 0; l < c.layer_sparsity.size(); ++l) {
      sparsity.rows.push_back({std::to_string(c.iteration), Str(c.target),
                               Str(l), Str(c.layer_sparsity[l])});
    }
  }
  ctx.write_table("train_sparsity", sparsity);

  OJson layers = OJson::array();
  for (const DenseLayer& l : result.model.layers()) {
    layers.push_back(zero_fraction(l.weights));
  }
  ctx.write_json("train_summary.json",
                 {{"train_accuracy", accuracy(result.model, train)},
                  {"test_accuracy", *result.history.final_test_accuracy},
                  {"layer_sparsity", layers}});
}

void CmdPrune(Context& ctx) {
  Mlp model = LoadModel(ctx.cfg().prune.model, "prune.model");
  Table report{{"layer", "threshold", "target_count", "achieved_sparsity"}, {}};
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const DenseMatrix& w = model.layer(l).weights;
    const SparsityCut cut = sparsity_to_threshold(w, ctx.cfg().prune.sparsity);
    PrunedLayer p = prune_to_sparsity(w, ctx.cfg().prune.sparsity);
    report.rows.push_back({Str(l), Str(cut.threshold), Str(cut.target_count),
                           Str(p.achieved_sparsity)});
    model.layer(l).weights = std::move(p.pruned);
  }
  save_model(model, ctx.produced("pruned_model.json"));
  ctx.write_table("prune", report);
}

Table GridTable(const std::vector<GridCellResult>& cells, std::uint64_t seed) {
  Table t{{"k", "m", "mean_err", "q_err", "satisfied", "trials", "seed"}, {}};
  for (const GridCellResult& c : cells) {
    t.rows.push_back({Str(c.k), Str(c.m), Str(c.mean_err), Str(c.quantile_err),
                      c.satisfied ? "1" : "0", Str(c.trials),
                      std::to_string(seed)});
  }
  return t;
}

void CmdClosenessGrid(Context& ctx) {
  const GridConfig& g = ctx.cfg().grid;
  if (!in_lemma_delta_regime(g.budget.delta_dp)) {
    ctx.warn("delta_dp outside (0, 0.1]; the sensitivity bound is evaluated "
             "outside its stated regime");
  }
  const std::vector<GridCellResult> cells = run_grid(g);
  ctx.write_table("grid", GridTable(cells, ctx.cfg().seed));
  Table fit{{"k", "slope", "adjacent_inversions"}, {}};
  for (double k : g.k_list) {
    const auto slope = loglog_slope(cells, k);
    fit.rows.push_back({Str(k), slope ? Str(*slope) : "",
                        Str(adjacent_inversions(cells, k))});
  }
  ctx.write_table("grid_fit", fit);
}

// Published minimal widths: 20 for eps_ap = 0.05 at every sparsity; for
// eps_ap = 0.01, 500 above sparsity 0.8 and 1500 otherwise.
std::string ReferenceM(double k, double target) {
  if (target == 0.05) return "20";
  if (target == 0.01) return k > 0.8 ? "500" : "1500";
  return "";
}

void CmdMinimalM(Context& ctx) {
  const GridConfig& g = ctx.cfg().grid;
  const std::vector<GridCellResult> cells = run_grid(g);
  Table t{{"k", "target", "minimal_m", "reference_m"}, {}};
  for (double target : ctx.cfg().minimal_m.targets) {
    for (double k : g.k_list) {
      const auto m = minimal_m(cells, k, target);
      t.rows.push_back({Str(k), Str(target), m ? Str(*m) : "none",
                        ReferenceM(k, target)});
    }
  }
  ctx.write_table("minimal_m", t);
}

void CmdInvert(Context& ctx) {
  const InvertSection& s = ctx.cfg().invert;
  const Mlp model = LoadModel(s.model, "invert.model");
  const Mlp release_model =
      s.target_model.empty() ? model : load_model(s.target_model);
  GrayImage original;
  std::optional<std::size_t> label;
  if (!s.image.empty()) {
    original = read_pgm(s.image);
  } else {
    original = digit_template(s.digit);
    label = s.digit;
  }
  const std::size_t side = original.width();
  DenseVector target = representation(release_model, s.layer, original.flatten());
  if (s.release_noise > 0.0) {
    target = target + sample_laplace_vector(0.0, s.release_noise, target.dim(),
                                            ctx.root().child(3).child(1));
  }
  const InversionResult r =
      invert(model, s.layer, target, side, original.height(), s.inversion);
  write_pgm(r.image, ctx.produced("inverted.pgm"));
  write_pgm(original, ctx.produced("original.pgm"));
  ctx.write("trace.csv", trace_to_csv(r.trace));
  OJson summary = {{"steps", r.steps},
                   {"final_objective", r.trace.back()},
                   {"ssim", ssim_normalized(r.image, original)},
                   {"phash", phash_similarity(r.image, original)}};
  if (label) summary["infe"] = inference_accuracy(model, r.image, *label);
  ctx.write_json("invert.json", summary);
}

void CmdLeakage(Context& ctx) {
  const LeakageComparison c = run_leakage_comparison(ctx.cfg().leakage);
  ctx.write_table("leakage_pruned", LeakageTable(c.pruned));
  ctx.write_table("leakage_noise", LeakageTable(c.noised));
  ctx.write_json(
      "leakage_summary.json",
      {{"sparsity", ctx.cfg().leakage.sparsity},
       {"baseline_accuracy", c.baseline_accuracy},
       {"pruned_accuracy", c.pruned_accuracy},
       {"noise_match",
        {{"scale", c.noise.scale},
         {"accuracy", c.noise.accuracy},
         {"target", c.noise.target},
         {"tolerance", ctx.cfg().leakage.accuracy_tolerance},
         {"converged", c.noise.converged},
         {"iterations", c.noise.iterations}}},
       {"pruned", {{"ssim", Summary(c.pruned.ssim)},
                   {"phash", Summary(c.pruned.phash)},
                   {"infe", Summary(c.pruned.infe)}}},
       {"noise", {{"ssim", Summary(c.noised.ssim)},
                  {"phash", Summary(c.noised.phash)},
                  {"infe", Summary(c.noised.infe)}}}});
  if (!c.noise.converged) {
    ctx.warn("noise-scale search did not reach the accuracy tolerance; "
             "reporting the last probe");
  }
}

void CmdDpCert(Context& ctx) {
  const DpCertSection& s = ctx.cfg().dp_cert;
  const double sigma_a = s.sigma_a_scale / static_cast<double>(s.m);
  const double gs1 = gs1_bound(s.m, s.d, sigma_a, s.budget.delta_dp);
  const double sigma = calibrate_sigma(s.budget, gs1, sigma_a, s.m, s.variant);
  const DenseVector bias(s.m);
  const RngStream base = ctx.root().child(5);
  Table t{{"trial", "sigma", "certificate", "certificate_gs1", "eps_dp",
           "defined"},
          {}};
  std::size_t defined = 0, within = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < s.trials; ++i) {
    const RngStream trial = base.child(i);
    const DenseMatrix a = sample_gaussian_matrix(s.m, s.d, sigma_a, trial.child(0));
    const DenseVector x1 = sample_unit_folded_gaussian(s.d, trial.child(1));
    DenseVector x2 = x1;
    x2[i % s.d] += 0.5;  // ||x1 - x2||_1 = 0.5
    const PrunedLayer p = prune_to_sparsity(a, s.sparsity);
    std::string cert = "", cert_gs1 = "";
    bool ok = true;
    try {
      const double c = dp_certificate(a, p.removed_mass, sigma, x1, x2, bias);
      cert = Str(c);
      cert_gs1 = Str(dp_certificate_gs1(gs1, p.removed_mass, sigma, x1, x2));
      worst = std::max(worst, c);
      within += c <= s.budget.eps_dp ? 1 : 0;
    } catch (const CertificateUndefinedError&) {
      ok = false;
    }
    defined += ok ? 1 : 0;
    t.rows.push_back({Str(i), Str(sigma), cert, cert_gs1, Str(s.budget.eps_dp),
                      ok ? "1" : "0"});
  }
  ctx.write_table("dp_cert", t);
  ctx.write_json("dp_cert_summary.json", {{"sigma", sigma},
                                          {"gs1_bound", gs1},
                                          {"trials", s.trials},
                                          {"defined", defined},
                                          {"within_budget", within},
                                          {"max_certificate", worst}});
}

void CmdVerify(Context& ctx) {
  const auto reports =
      run_all_checks(ctx.cfg().verify, ctx.root().child(6), ctx.cfg().jobs);
  ctx.write("verify.csv", reports_to_csv(reports));
  ctx.write("verify.json", reports_to_json(reports) + "\n");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Magnitude pruning versus differentially private noise",
               args.empty() ? "prunepriv" : args.front()};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  app.add_option("--config", flags.config, "JSON configuration file");
  app.add_option("--seed", flags.seed, "Base random seed");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--jobs", flags.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", flags.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", flags.overrides, "Config override key.path=value");

  struct Command {
    const char* help;
    std::function<void(Context&)> run;
  };
  const std::map<std::string, Command> handlers = {
      {"train", {"Train an MLP with gradual magnitude pruning", CmdTrain}},
      {"prune", {"Prune a saved model to a fixed sparsity", CmdPrune}},
      {"closeness-grid",
       {"Closeness error of pruning vs calibrated noise over (k, m)",
        CmdClosenessGrid}},
      {"minimal-m",
       {"Smallest width meeting each closeness target", CmdMinimalM}},
      {"invert", {"Invert a hidden representation of one image", CmdInvert}},
      {"leakage-compare",
       {"Pruned vs accuracy-matched noisy release under inversion",
        CmdLeakage}},
      {"dp-cert", {"Per-instance density-ratio certificates", CmdDpCert}},
      {"verify", {"Monte Carlo checks of the supporting lemmas", CmdVerify}},
      {"dataset", {"Write the train/test split as IDX files", CmdDataset}},
  };
  for (const auto& [name, cmd] : handlers) app.add_subcommand(name, cmd.help);

  std::vector<std::string> reversed(
      args.rbegin(), args.empty() ? args.rend() : args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Json root = flags.config.empty() ? Json::object()
                                     : load_config_file(flags.config);
    for (const std::string& o : flags.overrides) apply_override(root, o);
    if (flags.seed) root["seed"] = *flags.seed;
    if (flags.out) root["out"] = *flags.out;
    if (flags.jobs) root["jobs"] = *flags.jobs;
    ExperimentConfig cfg = parse_experiment_config(root);
    Context ctx(std::move(cfg), flags.format, out, err);
    const std::string name = app.get_subcommands().front()->get_name();
    handlers.at(name).run(ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace prunepriv
