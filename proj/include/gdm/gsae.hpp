#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "gdm/classifier.hpp"
#include "gdm/graph.hpp"

namespace gdm {

// Node pairs absent from a graph's edge set, used as zero targets in the
// reconstruction loss. Pairs are unordered (stored i < j), deduplicated,
// and never coincide with a true edge.
struct NegativeEdgeSample {
  std::vector<std::pair<Index, Index>> pairs;
};

// Uniform sample of min(|E|, #non-edges) non-edges, excluding self-pairs.
NegativeEdgeSample sample_negative_edges(const Graph& g, std::mt19937_64& rng);

// Structure-only auto-encoder. The encoder is two message-passing layers
// fed with the per-node degree as its sole input feature; the decoder is
// the parameter-free inner-product sigmoid. Dataset node features and
// labels are never read.
class GsaeModel {
 public:
  GsaeModel(Index embed_dim, std::uint64_t seed);

  // Structural embeddings H (n x embed_dim). Depends on the adjacency only.
  Matrix encode(const Graph& g) const;
  Tensor encode_taped(Tape& tape, const Graph& g) const;

  std::vector<Tensor> parameters() const;
  Index embed_dim() const { return embed_dim_; }

  DenseLayer& layer1() { return l1_; }
  DenseLayer& layer2() { return l2_; }
  const DenseLayer& layer1() const { return l1_; }
  const DenseLayer& layer2() const { return l2_; }

 private:
  Index embed_dim_;
  DenseLayer l1_, l2_;  // relu after layer 1 only; layer 2 output is linear
};

// Inner-product decoder: sigmoid(H H^T). Symmetric with entries in (0,1).
// The Gram matrix is mirrored from its upper triangle: blocked matrix
// kernels may accumulate (i,j) and (j,i) in different orders, and the
// symmetry contract here is exact, not approximate.
template <typename Derived>
Matrix decode_embedding(const Eigen::MatrixBase<Derived>& h) {
  Matrix gram = h * h.transpose();
  gram = gram.template selfadjointView<Eigen::Upper>();
  return (1.0 / (1.0 + (-gram.array()).exp())).matrix();
}

// Negative-sampled structure reconstruction loss
//   -[ sum_{(i,j) in E} log A^(i,j) + sum_{(i,j) in neg} log(1 - A^(i,j)) ]
// with logs clamped at 1e-12; differentiable w.r.t. the encoder parameters.
Tensor reconstruction_loss_taped(Tape& tape, const GsaeModel& model, const Graph& g,
                                 const NegativeEdgeSample& neg);
double reconstruction_loss(const GsaeModel& model, const Graph& g,
                           const NegativeEdgeSample& neg);

// Self-supervised training: each epoch resamples negatives for every graph,
// sums the reconstruction loss over the whole set, and takes one Adam step.
// Returns the per-epoch loss sequence; deterministic per seed.
std::vector<double> train_gsae(GsaeModel& model, const GraphDataset& dataset, int epochs,
                               double learning_rate, std::uint64_t seed);

}  // namespace gdm
