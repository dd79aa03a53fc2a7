#include "gdm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "gdm/checkpoint.hpp"
#include "gdm/fsio.hpp"
#include "gdm/rng.hpp"
#include "gdm/tu_io.hpp"

namespace gdm {

namespace {
// Fixed stream tags; stage seeds never depend on whether other stages ran,
// which is what makes the disabled-augmentation arm match the baseline
// bitwise.
constexpr std::uint64_t kStreamPretrain = 101;
constexpr std::uint64_t kStreamGsae = 102;
constexpr std::uint64_t kStreamGenerate = 103;
constexpr std::uint64_t kStreamMain = 104;
constexpr std::uint64_t kStreamFolds = 201;
constexpr std::uint64_t kStreamLabelPick = 301;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

MixupConfig ExperimentConfig::mixup_config() const {
  MixupConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.epsilon = epsilon;
  cfg.binarize = binarize;
  cfg.keep_isolated = keep_isolated;
  return cfg;
}

void ExperimentConfig::validate() const {
  if (folds < 2) throw std::invalid_argument("config: folds must be >= 2");
  if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
  if (labels_per_class < 1) throw std::invalid_argument("config: labels-per-class must be >= 1");
  if (epochs.pretrain < 0 || epochs.gsae < 0 || epochs.main_train < 0)
    throw std::invalid_argument("config: epoch counts must be >= 0");
  if (learning_rate <= 0.0) throw std::invalid_argument("config: lr must be positive");
  if (aug_multiplier < 0.0) throw std::invalid_argument("config: aug-multiplier must be >= 0");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  if (policy != "acc" && policy != "unc" && policy != "rand")
    throw std::invalid_argument("config: policy must be acc|unc|rand");
  parse_readout(readout);
  mixup_config().validate();
}

PipelineResult run_gdm_pipeline(const ExperimentConfig& cfg, const GraphDataset& train_set,
                                std::uint64_t seed) {
  if (train_set.graphs.empty())
    throw std::invalid_argument("pipeline: empty training set");
  const Readout readout = parse_readout(cfg.readout);
  const Index n_subsets = (cfg.use_low ? 1 : 0) + (cfg.use_med ? 1 : 0) + (cfg.use_high ? 1 : 0);

  std::vector<GeneratedGraph> generated;
  std::vector<double> pretrain_losses, gsae_losses;

  if (cfg.augment && n_subsets > 0 && cfg.aug_multiplier > 0.0) {
    GsaeModel gsae(cfg.gsae_dim, mix_seed(seed, kStreamGsae));
    gsae_losses = train_gsae(gsae, train_set, cfg.epochs.gsae, cfg.learning_rate,
                             mix_seed(seed, kStreamGsae, 1));

    const Index per_subset = static_cast<Index>(
        std::llround(cfg.aug_multiplier * static_cast<double>(train_set.size())));
    const MixupConfig mixup = cfg.mixup_config();

    if (cfg.policy == "rand") {
      generated = generate_random(gsae, train_set, mixup, per_subset * n_subsets,
                                  mix_seed(seed, kStreamGenerate));
    } else {
      ClassifierModel pretrained(train_set.feature_dim, cfg.hidden_dim, train_set.class_count,
                                 cfg.mp_layers, readout, mix_seed(seed, kStreamPretrain));
      pretrain_losses = train_classifier(pretrained, train_set.graphs, cfg.epochs.pretrain,
                                         cfg.learning_rate);
      const auto tags = assess_difficulty(pretrained, train_set, parse_policy(cfg.policy));
      GenerationPlan plan;
      plan.per_subset = per_subset;
      plan.low = cfg.use_low;
      plan.med = cfg.use_med;
      plan.high = cfg.use_high;
      plan.seed = mix_seed(seed, kStreamGenerate);
      generated = generate_balanced(gsae, train_set, tags, mixup, plan);
    }
  }

  ClassifierModel model(train_set.feature_dim, cfg.hidden_dim, train_set.class_count,
                        cfg.mp_layers, readout, mix_seed(seed, kStreamMain));
  std::vector<Graph> generated_graphs;
  generated_graphs.reserve(generated.size());
  for (const GeneratedGraph& g : generated) generated_graphs.push_back(g.graph);
  std::vector<double> main_losses = train_classifier_augmented(
      model, train_set.graphs, generated_graphs, cfg.lambda_gdm, cfg.epochs.main_train,
      cfg.learning_rate, cfg.sum_loss ? Reduction::Sum : Reduction::Mean);

  return PipelineResult{std::move(model), std::move(pretrain_losses), std::move(gsae_losses),
                        std::move(main_losses), std::move(generated)};
}

std::vector<std::vector<Index>> stratified_folds(const GraphDataset& ds, int k,
                                                 std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_folds: k must be >= 2");
  if (ds.size() < k)
    throw DataError("dataset " + ds.name + " has fewer graphs than folds");
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(ds.class_count));
  for (Index i = 0; i < ds.size(); ++i)
    by_class[static_cast<std::size_t>(argmax_lowest(ds.graphs[static_cast<std::size_t>(i)].label))]
        .push_back(i);
  std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
  auto rng = make_rng(seed);
  std::size_t next_fold = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (Index idx : members) {
      folds[next_fold].push_back(idx);
      next_fold = (next_fold + 1) % static_cast<std::size_t>(k);
    }
  }
  return folds;
}

namespace {

std::vector<Index> pick_labeled(const GraphDataset& ds, const std::vector<Index>& pool,
                                int per_class, int fold, std::uint64_t seed) {
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(ds.class_count));
  for (Index idx : pool)
    by_class[static_cast<std::size_t>(
                 argmax_lowest(ds.graphs[static_cast<std::size_t>(idx)].label))]
        .push_back(idx);
  auto rng = make_rng(seed);
  std::vector<Index> picked;
  for (Index c = 0; c < ds.class_count; ++c) {
    auto& members = by_class[static_cast<std::size_t>(c)];
    if (static_cast<int>(members.size()) < per_class)
      throw DataError("fold " + std::to_string(fold) + ": class " + std::to_string(c) +
                      " has only " + std::to_string(members.size()) +
                      " training graphs, need " + std::to_string(per_class));
    std::shuffle(members.begin(), members.end(), rng);
    picked.insert(picked.end(), members.begin(), members.begin() + per_class);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

void write_outputs(const ExperimentConfig& cfg, RunResult& result) {
  namespace fs = std::filesystem;
  const fs::path out(cfg.out_dir);

  std::ostringstream csv;
  csv << "fold,repeat,seed,test_accuracy,labeled_count,generated_count\n";
  for (const JobRecord& j : result.jobs)
    csv << j.fold << ',' << j.repeat << ',' << j.seed << ',' << format_double(j.accuracy)
        << ',' << j.labeled_count << ',' << j.generated_count << '\n';
  const std::string csv_text = csv.str();
  result.digest = content_digest(csv_text);
  result.results_csv_path = (out / "results.csv").string();
  atomic_write_file(result.results_csv_path, csv_text);

  std::ostringstream curves;
  curves << "fold,repeat,phase,epoch,loss\n";
  for (const JobRecord& j : result.jobs) {
    const auto dump = [&](const char* phase, const std::vector<double>& losses) {
      for (std::size_t e = 0; e < losses.size(); ++e)
        curves << j.fold << ',' << j.repeat << ',' << phase << ',' << e << ','
               << format_double(losses[e]) << '\n';
    };
    dump("pretrain", j.pretrain_losses);
    dump("gsae", j.gsae_losses);
    dump("main", j.main_losses);
  }
  result.curves_csv_path = (out / "loss_curves.csv").string();
  atomic_write_file(result.curves_csv_path, curves.str());

  nlohmann::json summary;
  summary["config"] = {{"dataset-root", cfg.dataset_root},
                       {"dataset", cfg.dataset_name},
                       {"out-dir", cfg.out_dir},
                       {"labels-per-class", cfg.labels_per_class},
                       {"folds", cfg.folds},
                       {"repeats", cfg.repeats},
                       {"seed", cfg.seed},
                       {"policy", cfg.policy},
                       {"readout", cfg.readout},
                       {"lambda-gdm", cfg.lambda_gdm},
                       {"pretrain-epochs", cfg.epochs.pretrain},
                       {"gsae-epochs", cfg.epochs.gsae},
                       {"main-epochs", cfg.epochs.main_train},
                       {"lr", cfg.learning_rate},
                       {"alpha", cfg.alpha},
                       {"beta", cfg.beta},
                       {"epsilon", cfg.epsilon},
                       {"binarize", cfg.binarize},
                       {"keep-isolated", cfg.keep_isolated},
                       {"aug-multiplier", cfg.aug_multiplier},
                       {"hidden-dim", cfg.hidden_dim},
                       {"gsae-dim", cfg.gsae_dim},
                       {"mp-layers", cfg.mp_layers},
                       {"no-low", !cfg.use_low},
                       {"no-med", !cfg.use_med},
                       {"no-high", !cfg.use_high},
                       {"augment", cfg.augment},
                       {"sum-loss", cfg.sum_loss},
                       {"jobs", cfg.jobs}};
  nlohmann::json accs = nlohmann::json::array();
  for (const JobRecord& j : result.jobs) accs.push_back(j.accuracy);
  summary["accuracies"] = std::move(accs);
  summary["mean_accuracy"] = result.mean_accuracy;
  summary["std_accuracy"] = result.std_accuracy;
  summary["runs"] = result.jobs.size();
  summary["results_digest"] = result.digest;
  result.summary_json_path = (out / "summary.json").string();
  atomic_write_file(result.summary_json_path, summary.dump(2) + "\n");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const GraphDataset& ds) {
  cfg.validate();
  const auto folds = stratified_folds(ds, cfg.folds, mix_seed(cfg.seed, kStreamFolds));

  struct JobSpec {
    int fold, repeat;
  };
  std::vector<JobSpec> specs;
  for (int f = 0; f < cfg.folds; ++f)
    for (int r = 0; r < cfg.repeats; ++r) specs.push_back({f, r});

  std::vector<JobRecord> records(specs.size());
  std::vector<std::exception_ptr> failures(specs.size());

  const auto run_job = [&](std::size_t idx) {
    const auto [fold, repeat] = specs[idx];
    const std::uint64_t job_seed =
        mix_seed(cfg.seed, static_cast<std::uint64_t>(fold) + 1,
                 static_cast<std::uint64_t>(repeat) + 1);
    std::vector<Index> pool;
    for (int f = 0; f < cfg.folds; ++f)
      if (f != fold)
        pool.insert(pool.end(), folds[static_cast<std::size_t>(f)].begin(),
                    folds[static_cast<std::size_t>(f)].end());
    const std::vector<Index> labeled =
        pick_labeled(ds, pool, cfg.labels_per_class, fold, mix_seed(job_seed, kStreamLabelPick));
    const GraphDataset train_set = subset_dataset(ds, labeled);

    PipelineResult pipe = run_gdm_pipeline(cfg, train_set, job_seed);

    const GraphDataset test_set = subset_dataset(ds, folds[static_cast<std::size_t>(fold)]);
    JobRecord rec;
    rec.fold = fold;
    rec.repeat = repeat;
    rec.seed = job_seed;
    rec.accuracy = evaluate_accuracy(pipe.model, test_set.graphs);
    rec.labeled_count = train_set.size();
    rec.generated_count = static_cast<Index>(pipe.generated.size());
    rec.pretrain_losses = std::move(pipe.pretrain_losses);
    rec.gsae_losses = std::move(pipe.gsae_losses);
    rec.main_losses = std::move(pipe.main_losses);
    records[idx] = std::move(rec);

    if (cfg.save_models) {
      char name[64];
      std::snprintf(name, sizeof(name), "model_fold%d_rep%d.ckpt", fold, repeat);
      save_classifier(pipe.model, (std::filesystem::path(cfg.out_dir) / name).string());
    }
  };

  if (cfg.jobs <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= specs.size()) return;
        try {
          run_job(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> threads;
    const int t_count = std::min<int>(cfg.jobs, static_cast<int>(specs.size()));
    threads.reserve(static_cast<std::size_t>(t_count));
    for (int t = 0; t < t_count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    for (const std::exception_ptr& f : failures)
      if (f) std::rethrow_exception(f);
  }

  RunResult result;
  result.jobs = std::move(records);
  double sum = 0.0, sq = 0.0;
  for (const JobRecord& j : result.jobs) {
    sum += j.accuracy;
    sq += j.accuracy * j.accuracy;
  }
  const double n = static_cast<double>(result.jobs.size());
  result.mean_accuracy = sum / n;
  result.std_accuracy = std::sqrt(std::max(0.0, sq / n - result.mean_accuracy * result.mean_accuracy));
  write_outputs(cfg, result);
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.dataset_root.empty() || cfg.dataset_name.empty())
    throw std::invalid_argument("config: dataset root and name are required");
  return run_experiment(cfg, load_tu_dataset(cfg.dataset_root, cfg.dataset_name));
}

}  // namespace gdm
