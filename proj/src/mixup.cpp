#include "gdm/mixup.hpp"

#include <algorithm>

#include "gdm/rng.hpp"

namespace gdm {

void MixupConfig::validate() const {
  if (alpha <= 0.0 || beta <= 0.0)
    throw std::invalid_argument("mixup: Beta shape parameters must be positive");
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("mixup: epsilon must lie in [0,1)");
}

double sample_lambda(const MixupConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  std::gamma_distribution<double> ga(cfg.alpha, 1.0);
  std::gamma_distribution<double> gb(cfg.beta, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  const double denom = x + y;
  if (denom <= 0.0) return 0.5;  // both draws underflowed
  return x / denom;
}

Matrix prune_weak_edges(Matrix a, double eps) {
  a.diagonal().setZero();
  return (a.array() < eps).select(Matrix::Zero(a.rows(), a.cols()), a);
}

Matrix binarize_edges(Matrix a) {
  return (a.array() != 0.0).select(Matrix::Ones(a.rows(), a.cols()), a);
}

Graph dual_mixup(const GsaeModel& gsae, const Graph& gi, const Graph& gj, double lambda,
                 const MixupConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (gi.feature_dim() != gj.feature_dim())
    throw std::invalid_argument("dual_mixup: feature dimension mismatch");
  if (gi.class_count() != gj.class_count())
    throw std::invalid_argument("dual_mixup: class count mismatch");
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("dual_mixup: lambda outside [0,1]");

  Graph a = cfg.permute_nodes ? random_node_permutation(gi, mix_seed(seed, 0)) : gi;
  Graph b = cfg.permute_nodes ? random_node_permutation(gj, mix_seed(seed, 1)) : gj;
  const Index target_n = std::max(a.n(), b.n());
  a = pad_to(a, target_n);
  b = pad_to(b, target_n);

  Graph out;
  out.node_features = lambda * a.node_features + (1.0 - lambda) * b.node_features;
  out.label = lambda * a.label + (1.0 - lambda) * b.label;

  const Matrix mixed_embedding = lambda * gsae.encode(a) + (1.0 - lambda) * gsae.encode(b);
  Matrix adj = prune_weak_edges(decode_embedding(mixed_embedding), cfg.epsilon);
  if (cfg.binarize) adj = binarize_edges(std::move(adj));
  out.adjacency = std::move(adj);

  if (!cfg.keep_isolated) {
    std::vector<Index> keep;
    for (Index i = 0; i < out.n(); ++i)
      if (out.adjacency.row(i).any()) keep.push_back(i);
    if (keep.empty()) keep.push_back(0);  // a graph must retain at least one node
    if (static_cast<Index>(keep.size()) < out.n()) {
      Matrix x(static_cast<Index>(keep.size()), out.node_features.cols());
      Matrix adj2(static_cast<Index>(keep.size()), static_cast<Index>(keep.size()));
      for (std::size_t r = 0; r < keep.size(); ++r) {
        x.row(static_cast<Index>(r)) = out.node_features.row(keep[r]);
        for (std::size_t c = 0; c < keep.size(); ++c)
          adj2(static_cast<Index>(r), static_cast<Index>(c)) = out.adjacency(keep[r], keep[c]);
      }
      out.node_features = std::move(x);
      out.adjacency = std::move(adj2);
    }
  }
  return out;
}

}  // namespace gdm
