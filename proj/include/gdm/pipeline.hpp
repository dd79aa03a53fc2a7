#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdm/classifier.hpp"
#include "gdm/graph.hpp"
#include "gdm/mixup.hpp"
#include "gdm/sampling.hpp"

namespace gdm {

struct EpochSchedule {
  int pretrain = 100;  // classifier pre-training on originals
  int gsae = 200;      // structural auto-encoder
  int main_train = 800;  // final training on originals + generated
};

struct ExperimentConfig {
  std::string dataset_root;
  std::string dataset_name;
  std::string out_dir = "gdm-out";

  int labels_per_class = 10;
  int folds = 10;
  int repeats = 3;
  std::uint64_t seed = 7;

  std::string policy = "acc";  // acc | unc | rand
  bool use_low = true;
  bool use_med = true;
  bool use_high = true;
  std::string readout = "mean";

  double lambda_gdm = 1.0;
  EpochSchedule epochs;
  double learning_rate = 1e-2;

  double alpha = 1.0;
  double beta = 1.0;
  double epsilon = 0.1;
  bool binarize = true;
  bool keep_isolated = true;
  double aug_multiplier = 1.0;  // per-subset count m = round(multiplier * N)

  Index hidden_dim = 64;
  Index gsae_dim = 32;
  int mp_layers = 4;

  bool augment = true;   // false: plain baseline arm, no generation stages
  bool sum_loss = false; // sum the per-set losses instead of averaging
  int jobs = 1;          // worker threads over fold x repeat jobs
  bool save_models = false;

  MixupConfig mixup_config() const;
  void validate() const;
};

struct PipelineResult {
  ClassifierModel model;
  std::vector<double> pretrain_losses;
  std::vector<double> gsae_losses;
  std::vector<double> main_losses;
  std::vector<GeneratedGraph> generated;
};

// Augmentation-and-training procedure on one labeled training set:
// (1) pre-train a classifier on the originals, (2) train the GSAE,
// (3) assess per-graph difficulty, (4) generate the difficulty subsets,
// (5) train a fresh classifier on originals + generated under
//     loss(originals) + lambda_gdm * loss(generated).
// With cfg.augment == false (or every subset disabled and lambda_gdm == 0)
// the final training degenerates bitwise to the plain baseline.
PipelineResult run_gdm_pipeline(const ExperimentConfig& cfg, const GraphDataset& train_set,
                                std::uint64_t seed);

struct JobRecord {
  int fold = 0;
  int repeat = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  Index labeled_count = 0;
  Index generated_count = 0;
  std::vector<double> pretrain_losses, gsae_losses, main_losses;
};

struct RunResult {
  std::vector<JobRecord> jobs;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population standard deviation
  std::string digest;         // content digest of results.csv
  std::string results_csv_path, summary_json_path, curves_csv_path;
};

// Deterministic stratified k-fold split; returns k disjoint index sets
// covering the dataset, classes dealt round-robin after a seeded shuffle.
std::vector<std::vector<Index>> stratified_folds(const GraphDataset& ds, int k,
                                                 std::uint64_t seed);

// Full experiment: per fold and repeat, sample labels_per_class labeled
// graphs per class from the training folds, run the pipeline, evaluate on
// the held-out fold, then aggregate and write results.csv, summary.json
// and loss_curves.csv under cfg.out_dir.
RunResult run_experiment(const ExperimentConfig& cfg, const GraphDataset& ds);
RunResult run_experiment(const ExperimentConfig& cfg);  // loads cfg dataset

}  // namespace gdm
