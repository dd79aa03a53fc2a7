#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <type_traits>

#include <CLI11.hpp>

#include "gdm/checkpoint.hpp"
#include "gdm/fsio.hpp"
#include "gdm/gradcheck.hpp"
#include "gdm/graph_json.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/rng.hpp"
#include "gdm/tu_io.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

void add_dataset_options(CLI::App* cmd, gdm::ExperimentConfig& cfg) {
  cmd->add_option("--dataset-root", cfg.dataset_root, "Directory containing TU-format datasets")
      ->required();
  cmd->add_option("--dataset", cfg.dataset_name, "Dataset name (subdirectory + file prefix)")
      ->required();
}

void add_common_options(CLI::App* cmd, gdm::ExperimentConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "Flat key=value config file; command-line flags win");
  cmd->add_option("--out-dir", cfg.out_dir, "Output directory");
  cmd->add_option("--seed", cfg.seed, "Master random seed");
  cmd->add_option("--policy", cfg.policy, "Difficulty policy: acc|unc|rand")
      ->check(CLI::IsMember({"acc", "unc", "rand"}));
  cmd->add_option("--readout", cfg.readout, "Graph readout: mean|add|max")
      ->check(CLI::IsMember({"mean", "add", "max"}));
  cmd->add_flag("--no-low", [&cfg](std::int64_t) { cfg.use_low = false; },
                "Skip the low-difficulty generated subset");
  cmd->add_flag("--no-med", [&cfg](std::int64_t) { cfg.use_med = false; },
                "Skip the medium-difficulty generated subset");
  cmd->add_flag("--no-high", [&cfg](std::int64_t) { cfg.use_high = false; },
                "Skip the high-difficulty generated subset");
  cmd->add_option("--aug-multiplier", cfg.aug_multiplier,
                  "Per-subset generation count as a multiple of the training-set size");
  cmd->add_option("--epsilon", cfg.epsilon, "Weak-edge pruning threshold");
  cmd->add_option("--lambda-gdm", cfg.lambda_gdm, "Weight of the generated-set loss term");
  cmd->add_option("--alpha", cfg.alpha, "Beta distribution shape alpha");
  cmd->add_option("--beta", cfg.beta, "Beta distribution shape beta");
  cmd->add_flag("--no-binarize", [&cfg](std::int64_t) { cfg.binarize = false; },
                "Keep pruned decoder weights instead of binarizing");
  cmd->add_flag("--drop-isolated", [&cfg](std::int64_t) { cfg.keep_isolated = false; },
                "Drop generated nodes whose decoded row prunes to zero");
  cmd->add_option("--pretrain-epochs", cfg.epochs.pretrain, "Classifier pre-training epochs");
  cmd->add_option("--gsae-epochs", cfg.epochs.gsae, "Auto-encoder training epochs");
  cmd->add_option("--main-epochs", cfg.epochs.main_train, "Final training epochs");
  cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate");
  cmd->add_option("--hidden-dim", cfg.hidden_dim, "Classifier hidden width");
  cmd->add_option("--gsae-dim", cfg.gsae_dim, "Structural embedding width");
  cmd->add_option("--mp-layers", cfg.mp_layers, "Message-passing layer count");
  cmd->add_flag("--sum-loss", cfg.sum_loss, "Sum per-set losses instead of averaging");
  cmd->add_option("--jobs", cfg.jobs, "Worker threads over fold x repeat jobs");
  cmd->add_flag("--save-models", cfg.save_models, "Write final model checkpoints");
}

void add_experiment_options(CLI::App* cmd, gdm::ExperimentConfig& cfg,
                            std::string& config_path) {
  add_dataset_options(cmd, cfg);
  add_common_options(cmd, cfg, config_path);
  cmd->add_option("--labels-per-class", cfg.labels_per_class,
                  "Labeled graphs per class in each training fold");
  cmd->add_option("--folds", cfg.folds, "Cross-validation folds");
  cmd->add_option("--repeats", cfg.repeats, "Repeats per fold");
}

// Applies `key=value` lines from a config file to cfg. Every key mirrors a
// long flag of the parsed subcommand; values given on the command line win.
void apply_config_file(const CLI::App* cmd, gdm::ExperimentConfig& cfg,
                       const std::string& path) {
  const auto parse_bool = [](const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw gdm::UsageError("config: key '" + key + "' expects a boolean, got '" + v + "'");
  };
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const auto num = [](auto& field) {
    return [&field](const std::string& key, const std::string& v) {
      try {
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(field)>>)
          field = std::stod(v);
        else
          field = static_cast<std::decay_t<decltype(field)>>(std::stoll(v));
      } catch (const std::exception&) {
        throw gdm::UsageError("config: key '" + key + "' has a malformed value '" + v + "'");
      }
    };
  };
  std::map<std::string, Setter> setters;
  setters["dataset-root"] = [&](const std::string&, const std::string& v) { cfg.dataset_root = v; };
  setters["dataset"] = [&](const std::string&, const std::string& v) { cfg.dataset_name = v; };
  setters["out-dir"] = [&](const std::string&, const std::string& v) { cfg.out_dir = v; };
  setters["seed"] = num(cfg.seed);
  setters["policy"] = [&](const std::string&, const std::string& v) { cfg.policy = v; };
  setters["readout"] = [&](const std::string&, const std::string& v) { cfg.readout = v; };
  setters["labels-per-class"] = num(cfg.labels_per_class);
  setters["folds"] = num(cfg.folds);
  setters["repeats"] = num(cfg.repeats);
  setters["no-low"] = [&](const std::string& k, const std::string& v) {
    cfg.use_low = !parse_bool(k, v);
  };
  setters["no-med"] = [&](const std::string& k, const std::string& v) {
    cfg.use_med = !parse_bool(k, v);
  };
  setters["no-high"] = [&](const std::string& k, const std::string& v) {
    cfg.use_high = !parse_bool(k, v);
  };
  setters["aug-multiplier"] = num(cfg.aug_multiplier);
  setters["epsilon"] = num(cfg.epsilon);
  setters["lambda-gdm"] = num(cfg.lambda_gdm);
  setters["alpha"] = num(cfg.alpha);
  setters["beta"] = num(cfg.beta);
  setters["no-binarize"] = [&](const std::string& k, const std::string& v) {
    cfg.binarize = !parse_bool(k, v);
  };
  setters["drop-isolated"] = [&](const std::string& k, const std::string& v) {
    cfg.keep_isolated = !parse_bool(k, v);
  };
  setters["pretrain-epochs"] = num(cfg.epochs.pretrain);
  setters["gsae-epochs"] = num(cfg.epochs.gsae);
  setters["main-epochs"] = num(cfg.epochs.main_train);
  setters["lr"] = num(cfg.learning_rate);
  setters["hidden-dim"] = num(cfg.hidden_dim);
  setters["gsae-dim"] = num(cfg.gsae_dim);
  setters["mp-layers"] = num(cfg.mp_layers);
  setters["sum-loss"] = [&](const std::string& k, const std::string& v) {
    cfg.sum_loss = parse_bool(k, v);
  };
  setters["jobs"] = num(cfg.jobs);
  setters["save-models"] = [&](const std::string& k, const std::string& v) {
    cfg.save_models = parse_bool(k, v);
  };

  std::string text;
  try {
    text = gdm::read_file(path);
  } catch (const gdm::DataError& e) {
    throw gdm::UsageError(e.what());
  }
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw gdm::UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end() || cmd->get_option_no_throw("--" + key) == nullptr)
      throw gdm::UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                            "' for this subcommand");
    if (cmd->count("--" + key) > 0) continue;  // command line wins
    it->second(key, value);
  }
}

int report_experiment(const gdm::RunResult& result) {
  std::printf("runs: %zu  mean accuracy: %.4f  std: %.4f\n", result.jobs.size(),
              result.mean_accuracy, result.std_accuracy);
  std::printf("results: %s\nsummary: %s\n", result.results_csv_path.c_str(),
              result.summary_json_path.c_str());
  return 0;
}

int cmd_augment(const gdm::ExperimentConfig& cfg) {
  cfg.validate();
  const gdm::GraphDataset ds = gdm::load_tu_dataset(cfg.dataset_root, cfg.dataset_name);
  const std::uint64_t seed = cfg.seed;

  gdm::GsaeModel gsae(cfg.gsae_dim, gdm::mix_seed(seed, 102));
  gdm::train_gsae(gsae, ds, cfg.epochs.gsae, cfg.learning_rate, gdm::mix_seed(seed, 102, 1));

  const gdm::Index per_subset = static_cast<gdm::Index>(
      std::llround(cfg.aug_multiplier * static_cast<double>(ds.size())));
  const gdm::MixupConfig mixup = cfg.mixup_config();
  const gdm::Index n_subsets =
      (cfg.use_low ? 1 : 0) + (cfg.use_med ? 1 : 0) + (cfg.use_high ? 1 : 0);

  std::vector<gdm::GeneratedGraph> generated;
  if (cfg.policy == "rand") {
    generated = gdm::generate_random(gsae, ds, mixup, per_subset * n_subsets,
                                     gdm::mix_seed(seed, 103));
  } else {
    gdm::ClassifierModel pretrained(ds.feature_dim, cfg.hidden_dim, ds.class_count,
                                    cfg.mp_layers, gdm::parse_readout(cfg.readout),
                                    gdm::mix_seed(seed, 101));
    gdm::train_classifier(pretrained, ds.graphs, cfg.epochs.pretrain, cfg.learning_rate);
    const auto tags = gdm::assess_difficulty(pretrained, ds, gdm::parse_policy(cfg.policy));
    gdm::GenerationPlan plan;
    plan.per_subset = per_subset;
    plan.low = cfg.use_low;
    plan.med = cfg.use_med;
    plan.high = cfg.use_high;
    plan.seed = gdm::mix_seed(seed, 103);
    generated = gdm::generate_balanced(gsae, ds, tags, mixup, plan);
  }

  namespace fs = std::filesystem;
  const fs::path out(cfg.out_dir);
  gdm::save_graph_set_json(generated, ds.feature_dim, ds.class_count,
                           (out / "generated_graphs.json").string());
  gdm::save_provenance_json(generated, (out / "provenance.json").string());
  if (cfg.save_models) gdm::save_gsae(gsae, (out / "gsae.ckpt").string());
  std::printf("generated %zu graphs -> %s\n", generated.size(),
              (out / "generated_graphs.json").string().c_str());
  return 0;
}

int cmd_gradcheck() {
  const auto results = gdm::run_gradient_checks();
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%-24s max rel err %.3e  %s\n", r.name.c_str(), r.max_rel_error,
                r.pass ? "ok" : "FAIL");
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph dual-mixup augmentation for low-label graph classification"};
  app.require_subcommand(1);

  gdm::ExperimentConfig cfg;
  std::string config_path;

  CLI::App* run = app.add_subcommand("run", "Full augmented cross-validation experiment");
  add_experiment_options(run, cfg, config_path);

  CLI::App* baseline =
      app.add_subcommand("baseline", "No-augmentation arm of the experiment");
  add_experiment_options(baseline, cfg, config_path);

  CLI::App* augment = app.add_subcommand(
      "augment", "Train the auto-encoder and emit a generated graph set with provenance");
  add_dataset_options(augment, cfg);
  add_common_options(augment, cfg, config_path);

  CLI::App* exp = app.add_subcommand("export", "Re-serialize a dataset in TU text format");
  add_dataset_options(exp, cfg);
  exp->add_option("--out-dir", cfg.out_dir, "Output directory");

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "Finite-difference check of every kernel gradient");
  (void)gradcheck;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!config_path.empty())
      apply_config_file(app.get_subcommands().front(), cfg, config_path);
    if (run->parsed()) return report_experiment(gdm::run_experiment(cfg));
    if (baseline->parsed()) {
      cfg.augment = false;
      return report_experiment(gdm::run_experiment(cfg));
    }
    if (augment->parsed()) return cmd_augment(cfg);
    if (exp->parsed()) {
      const gdm::GraphDataset ds = gdm::load_tu_dataset(cfg.dataset_root, cfg.dataset_name);
      gdm::save_tu_dataset(ds, cfg.out_dir);
      std::printf("exported %lld graphs -> %s\n", static_cast<long long>(ds.size()),
                  cfg.out_dir.c_str());
      return 0;
    }
    if (gradcheck->parsed()) return cmd_gradcheck();
  } catch (const gdm::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const gdm::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
