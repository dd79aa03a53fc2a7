#include "gdm/classifier.hpp"

#include <cmath>

#include "gdm/adam.hpp"
#include "gdm/rng.hpp"

namespace gdm {

Readout parse_readout(const std::string& text) {
  if (text == "mean") return Readout::Mean;
  if (text == "add") return Readout::Add;
  if (text == "max") return Readout::Max;
  throw std::invalid_argument("unknown readout '" + text + "' (expected mean|add|max)");
}

std::string to_string(Readout r) {
  switch (r) {
    case Readout::Mean: return "mean";
    case Readout::Add: return "add";
    case Readout::Max: return "max";
  }
  return "mean";
}

namespace {

DenseLayer glorot_layer(Index in, Index out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix w(in, out);
  for (Index i = 0; i < in; ++i)
    for (Index j = 0; j < out; ++j) w(i, j) = dist(rng);
  return DenseLayer{Tensor::parameter(std::move(w)), Tensor::parameter(Matrix::Zero(1, out))};
}

}  // namespace

ClassifierModel::ClassifierModel(Index input_dim, Index hidden_dim, Index class_count,
                                 int mp_layers, Readout readout, std::uint64_t seed)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), class_count_(class_count),
      readout_(readout) {
  if (input_dim < 1 || hidden_dim < 1 || class_count < 1 || mp_layers < 1)
    throw std::invalid_argument("classifier: dimensions must be positive");
  auto rng = make_rng(seed);
  Index in = input_dim;
  for (int l = 0; l < mp_layers; ++l) {
    mp_layers_.push_back(glorot_layer(in, hidden_dim, rng));
    in = hidden_dim;
  }
  fc1_ = glorot_layer(hidden_dim, hidden_dim, rng);
  fc2_ = glorot_layer(hidden_dim, class_count, rng);
}

namespace {

Tensor message_passing(Tape& tape, const std::vector<DenseLayer>& layers, const Graph& g) {
  const Tensor a_hat = Tensor::constant(normalize_adjacency(g.adjacency));
  Tensor h = Tensor::constant(g.node_features);
  for (const DenseLayer& layer : layers)
    h = tape.relu(tape.add(tape.matmul(a_hat, tape.matmul(h, layer.weight)), layer.bias));
  return h;
}

}  // namespace

Tensor ClassifierModel::forward_log_probs(Tape& tape, const Graph& g) const {
  if (g.feature_dim() != input_dim_)
    throw std::invalid_argument("classifier: graph feature width " +
                                std::to_string(g.feature_dim()) + " != model input dim " +
                                std::to_string(input_dim_));
  Tensor h = message_passing(tape, mp_layers_, g);
  Tensor pooled;
  switch (readout_) {
    case Readout::Mean: pooled = tape.row_mean(h); break;
    case Readout::Add: pooled = tape.row_sum(h); break;
    case Readout::Max: pooled = tape.row_max(h); break;
  }
  Tensor hidden = tape.relu(tape.add(tape.matmul(pooled, fc1_.weight), fc1_.bias));
  Tensor logits = tape.add(tape.matmul(hidden, fc2_.weight), fc2_.bias);
  return tape.log_softmax(logits);
}

Prediction ClassifierModel::forward(const Graph& g) const {
  Tape tape;
  const Tensor lp = forward_log_probs(tape, g);
  Prediction p;
  p.log_probs = lp.value().row(0).transpose();
  p.probs = p.log_probs.array().exp().matrix();
  return p;
}

Matrix ClassifierModel::node_embeddings(const Graph& g) const {
  if (g.feature_dim() != input_dim_)
    throw std::invalid_argument("classifier: graph feature width mismatch");
  Tape tape;
  return message_passing(tape, mp_layers_, g).value();
}

std::vector<Tensor> ClassifierModel::parameters() const {
  std::vector<Tensor> out;
  for (const DenseLayer& l : mp_layers_) {
    out.push_back(l.weight);
    out.push_back(l.bias);
  }
  out.push_back(fc1_.weight);
  out.push_back(fc1_.bias);
  out.push_back(fc2_.weight);
  out.push_back(fc2_.bias);
  return out;
}

namespace {

Matrix stack_labels(const std::vector<Graph>& graphs, Index class_count) {
  Matrix targets(static_cast<Index>(graphs.size()), class_count);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i].label.size() != class_count)
      throw std::invalid_argument("training: label width mismatch");
    targets.row(static_cast<Index>(i)) = graphs[i].label.transpose();
  }
  return targets;
}

}  // namespace

std::vector<double> train_classifier_augmented(ClassifierModel& model,
                                               const std::vector<Graph>& originals,
                                               const std::vector<Graph>& generated,
                                               double lambda_gdm, int epochs,
                                               double learning_rate, Reduction reduction) {
  if (originals.empty()) throw std::invalid_argument("training: empty train set");
  if (epochs < 0) throw std::invalid_argument("training: negative epoch count");
  const Matrix orig_targets = stack_labels(originals, model.class_count());
  const bool use_generated = lambda_gdm != 0.0 && !generated.empty();
  const Matrix gen_targets =
      use_generated ? stack_labels(generated, model.class_count()) : Matrix();

  AdamState adam(model.parameters(), learning_rate);
  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(epochs));
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Tape tape;
    std::vector<Tensor> rows;
    rows.reserve(originals.size());
    for (const Graph& g : originals) rows.push_back(model.forward_log_probs(tape, g));
    Tensor loss = soft_cross_entropy(tape, tape.concat_rows(rows), orig_targets, reduction);
    if (use_generated) {
      std::vector<Tensor> gen_rows;
      gen_rows.reserve(generated.size());
      for (const Graph& g : generated) gen_rows.push_back(model.forward_log_probs(tape, g));
      Tensor gen_loss =
          soft_cross_entropy(tape, tape.concat_rows(gen_rows), gen_targets, reduction);
      loss = tape.add(loss, tape.scale(gen_loss, lambda_gdm));
    }
    losses.push_back(loss.value()(0, 0));
    tape.backward(loss);
    adam.step();
  }
  return losses;
}

std::vector<double> train_classifier(ClassifierModel& model, const std::vector<Graph>& train_set,
                                     int epochs, double learning_rate) {
  return train_classifier_augmented(model, train_set, {}, 0.0, epochs, learning_rate);
}

Index argmax_lowest(const Vector& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

double evaluate_accuracy(const ClassifierModel& model, const std::vector<Graph>& eval_set) {
  if (eval_set.empty()) throw std::invalid_argument("evaluate: empty evaluation set");
  std::size_t correct = 0;
  for (const Graph& g : eval_set) {
    const Prediction p = model.forward(g);
    if (argmax_lowest(p.probs) == argmax_lowest(g.label)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval_set.size());
}

}  // namespace gdm
