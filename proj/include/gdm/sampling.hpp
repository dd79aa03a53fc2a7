#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdm/classifier.hpp"
#include "gdm/graph.hpp"
#include "gdm/mixup.hpp"

namespace gdm {

enum class Difficulty { Low, High };
enum class DifficultyPolicy { Acc, Unc };

DifficultyPolicy parse_policy(const std::string& text);  // "acc" | "unc"
std::string to_string(DifficultyPolicy p);

struct DifficultyTag {
  Index graph_index = 0;
  Difficulty level = Difficulty::Low;
  DifficultyPolicy policy = DifficultyPolicy::Acc;
  double score = 0.0;  // entropy under Unc, 0/1 correctness under Acc
};

// -sum_c p_c ln p_c with 0 ln 0 = 0.
double prediction_entropy(const Vector& probs);

// Low iff the predicted class matches the label (argmax ties break low).
Difficulty accuracy_difficulty(const Vector& probs, const Vector& label);

// Median with even-size input resolved as the mean of the middle two.
double median(std::vector<double> values);

// Tags every graph in the dataset using the pre-trained model. Acc: Low iff
// the prediction is correct. Unc: Low iff prediction entropy <= median of
// all entropies (ties at the median count as Low).
std::vector<DifficultyTag> assess_difficulty(const ClassifierModel& model,
                                             const GraphDataset& dataset,
                                             DifficultyPolicy policy);

// A generated graph plus the provenance needed to replay its construction
// bitwise: source pair, lambda, mixup seed, and the subset recipe it came
// from ("low" | "med" | "high" | "rand").
struct GeneratedGraph {
  Graph graph;
  Index source_i = -1;
  Index source_j = -1;
  double lambda = 0.0;
  std::string subset;
  std::uint64_t mix_seed = 0;
};

struct GenerationPlan {
  Index per_subset = 0;  // m; each enabled subset emits exactly m graphs
  bool low = true;
  bool med = true;
  bool high = true;
  std::uint64_t seed = 0;
};

// Difficulty-balanced generation: per_subset graphs from (Low,Low) pairs,
// per_subset from (Low,High), per_subset from (High,High), pairs sampled
// uniformly with replacement and a fresh lambda per pair. A graph pairs
// with itself only when its difficulty class is a singleton. If one class
// is empty, the affected subsets fall back to random pairing with a
// warning.
std::vector<GeneratedGraph> generate_balanced(const GsaeModel& gsae, const GraphDataset& dataset,
                                              const std::vector<DifficultyTag>& tags,
                                              const MixupConfig& cfg, const GenerationPlan& plan);
std::vector<GeneratedGraph> generate_balanced(const GsaeModel& gsae, const GraphDataset& dataset,
                                              const std::vector<DifficultyTag>& tags,
                                              const MixupConfig& cfg, Index per_subset,
                                              std::uint64_t seed);

// Difficulty-blind ablation arm: `count` graphs from uniformly random
// ordered pairs (self-pairs allowed).
std::vector<GeneratedGraph> generate_random(const GsaeModel& gsae, const GraphDataset& dataset,
                                            const MixupConfig& cfg, Index count,
                                            std::uint64_t seed);

}  // namespace gdm
