#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdm/graph.hpp"
#include "gdm/kernel_ops.hpp"
#include "gdm/tape.hpp"

namespace gdm {

enum class Readout { Mean, Add, Max };

Readout parse_readout(const std::string& text);
std::string to_string(Readout r);

struct Prediction {
  Vector probs;      // length C, exp(log_probs), sums to 1
  Vector log_probs;  // length C
};

struct DenseLayer {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out
};

// Message-passing graph classifier: L rounds of
//   h <- relu(normalize_adjacency(A) * h * W + b)
// followed by a permutation-invariant readout over nodes and a two-layer
// head ending in log-softmax.
class ClassifierModel {
 public:
  ClassifierModel(Index input_dim, Index hidden_dim, Index class_count, int mp_layers,
                  Readout readout, std::uint64_t seed);

  Prediction forward(const Graph& g) const;

  // Taped forward pass returning 1 x C log-probabilities; used by training.
  Tensor forward_log_probs(Tape& tape, const Graph& g) const;

  // Final-layer node embeddings (n x hidden_dim), before readout.
  Matrix node_embeddings(const Graph& g) const;

  std::vector<Tensor> parameters() const;

  Index input_dim() const { return input_dim_; }
  Index hidden_dim() const { return hidden_dim_; }
  Index class_count() const { return class_count_; }
  int mp_layer_count() const { return static_cast<int>(mp_layers_.size()); }
  Readout readout() const { return readout_; }

  std::vector<DenseLayer>& mp_layers() { return mp_layers_; }
  DenseLayer& head_hidden() { return fc1_; }
  DenseLayer& head_out() { return fc2_; }
  const std::vector<DenseLayer>& mp_layers() const { return mp_layers_; }
  const DenseLayer& head_hidden() const { return fc1_; }
  const DenseLayer& head_out() const { return fc2_; }

 private:
  Index input_dim_, hidden_dim_, class_count_;
  Readout readout_;
  std::vector<DenseLayer> mp_layers_;
  DenseLayer fc1_, fc2_;
};

// Full-batch cross-entropy training on `train_set`; returns the per-epoch
// loss sequence. Consumes no randomness, so runs are bitwise reproducible
// for a given model initialization.
std::vector<double> train_classifier(ClassifierModel& model, const std::vector<Graph>& train_set,
                                     int epochs, double learning_rate);

// Augmented objective: reduction(CE over originals) +
// lambda_gdm * reduction(CE over generated). An empty generated set or
// lambda_gdm == 0 degenerates bitwise to train_classifier.
std::vector<double> train_classifier_augmented(ClassifierModel& model,
                                               const std::vector<Graph>& originals,
                                               const std::vector<Graph>& generated,
                                               double lambda_gdm, int epochs,
                                               double learning_rate,
                                               Reduction reduction = Reduction::Mean);

// Fraction of graphs whose predicted argmax matches the label argmax; ties
// break toward the lowest class index. Empty set is a contract violation.
double evaluate_accuracy(const ClassifierModel& model, const std::vector<Graph>& eval_set);

// Argmax with ties resolved to the lowest index.
Index argmax_lowest(const Vector& v);

}  // namespace gdm
