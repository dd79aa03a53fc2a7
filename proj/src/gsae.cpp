#include "gdm/gsae.hpp"

#include <algorithm>
#include <cmath>

#include "gdm/adam.hpp"
#include "gdm/kernel_ops.hpp"
#include "gdm/rng.hpp"

namespace gdm {

namespace {
constexpr double kLogClamp = 1e-12;

DenseLayer glorot_layer(Index in, Index out, std::mt19937_64& rng, double gain = 1.0) {
  const double limit = gain * std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix w(in, out);
  for (Index i = 0; i < in; ++i)
    for (Index j = 0; j < out; ++j) w(i, j) = dist(rng);
  return DenseLayer{Tensor::parameter(std::move(w)), Tensor::parameter(Matrix::Zero(1, out))};
}
}  // namespace

NegativeEdgeSample sample_negative_edges(const Graph& g, std::mt19937_64& rng) {
  const Index n = g.n();
  std::vector<std::pair<Index, Index>> candidates;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (g.adjacency(i, j) == 0.0) candidates.emplace_back(i, j);
  const std::size_t want =
      std::min(candidates.size(), static_cast<std::size_t>(g.edge_count()));
  NegativeEdgeSample out;
  out.pairs.reserve(want);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(out.pairs), want, rng);
  return out;
}

GsaeModel::GsaeModel(Index embed_dim, std::uint64_t seed) : embed_dim_(embed_dim) {
  if (embed_dim < 1) throw std::invalid_argument("gsae: embed_dim must be positive");
  auto rng = make_rng(seed);
  l1_ = glorot_layer(1, embed_dim, rng);  // input feature: per-node degree
  // small output gain starts the Gram near zero, i.e. decoded scores near
  // sigma(0) = 0.5, instead of deep in sigmoid saturation
  l2_ = glorot_layer(embed_dim, embed_dim, rng, 0.1);
}

Tensor GsaeModel::encode_taped(Tape& tape, const Graph& g) const {
  const Tensor a_hat = Tensor::constant(normalize_adjacency(g.adjacency));
  const Tensor deg = Tensor::constant(degrees(g));
  Tensor h = tape.relu(tape.add(tape.matmul(a_hat, tape.matmul(deg, l1_.weight)), l1_.bias));
  return tape.add(tape.matmul(a_hat, tape.matmul(h, l2_.weight)), l2_.bias);
}

Matrix GsaeModel::encode(const Graph& g) const {
  Tape tape;
  return encode_taped(tape, g).value();
}

std::vector<Tensor> GsaeModel::parameters() const {
  return {l1_.weight, l1_.bias, l2_.weight, l2_.bias};
}

Tensor reconstruction_loss_taped(Tape& tape, const GsaeModel& model, const Graph& g,
                                 const NegativeEdgeSample& neg) {
  const auto edges = g.edges();
  for (const auto& [i, j] : neg.pairs)
    if (i == j || g.adjacency(i, j) != 0.0)
      throw std::invalid_argument("reconstruction_loss: invalid negative sample");

  const Tensor h = model.encode_taped(tape, g);
  const Matrix a_hat = decode_embedding(h.value());

  double total = 0.0;
  for (const auto& [i, j] : edges) total -= std::log(std::max(a_hat(i, j), kLogClamp));
  for (const auto& [i, j] : neg.pairs) total -= std::log(std::max(1.0 - a_hat(i, j), kLogClamp));

  Tensor out = tape.make_output(Matrix::Constant(1, 1, total), "reconstruction_loss");
  tape.record_backward([h, out, a_hat, edges, neg]() {
    // d(-log sigma(m)) / dm = sigma(m) - 1, d(-log(1 - sigma(m))) / dm =
    // sigma(m), with m the Gram entry; zero where the clamp is active.
    const Index n = h.value().rows();
    Matrix gram_grad = Matrix::Zero(n, n);
    for (const auto& [i, j] : edges)
      if (a_hat(i, j) > kLogClamp) gram_grad(i, j) += a_hat(i, j) - 1.0;
    for (const auto& [i, j] : neg.pairs)
      if (1.0 - a_hat(i, j) > kLogClamp) gram_grad(i, j) += a_hat(i, j);
    const Scalar upstream = out.grad()(0, 0);
    h.accumulate_grad(upstream *
                      ((gram_grad + gram_grad.transpose()) * h.value()));
  });
  return out;
}

double reconstruction_loss(const GsaeModel& model, const Graph& g,
                           const NegativeEdgeSample& neg) {
  Tape tape;
  return reconstruction_loss_taped(tape, model, g, neg).value()(0, 0);
}

std::vector<double> train_gsae(GsaeModel& model, const GraphDataset& dataset, int epochs,
                               double learning_rate, std::uint64_t seed) {
  if (epochs < 0) throw std::invalid_argument("train_gsae: negative epoch count");
  auto rng = make_rng(seed);
  AdamState adam(model.parameters(), learning_rate);
  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(epochs));
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Tape tape;
    std::vector<Tensor> terms;
    for (const Graph& g : dataset.graphs) {
      if (g.edge_count() == 0) continue;  // no positives and no negatives
      const NegativeEdgeSample neg = sample_negative_edges(g, rng);
      terms.push_back(reconstruction_loss_taped(tape, model, g, neg));
    }
    if (terms.empty()) {
      losses.push_back(0.0);
      continue;  // nothing reaches the parameters; skip the step
    }
    Tensor loss = tape.sum_all(tape.concat_rows(terms));
    losses.push_back(loss.value()(0, 0));
    tape.backward(loss);
    adam.step();
  }
  return losses;
}

}  // namespace gdm
