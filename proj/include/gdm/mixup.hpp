#pragma once

#include <cstdint>
#include <random>

#include "gdm/graph.hpp"
#include "gdm/gsae.hpp"

namespace gdm {

struct MixupConfig {
  double alpha = 1.0;        // Beta shape
  double beta = 1.0;         // Beta shape
  double epsilon = 0.1;      // edge weights below this are pruned
  bool binarize = true;      // surviving weights -> 1 (binary datasets)
  bool keep_isolated = true; // keep nodes whose decoded row prunes to zero
  bool permute_nodes = true; // random node alignment before padding

  void validate() const;
};

// One draw from Beta(alpha, beta); uniform on [0,1] when alpha = beta = 1.
double sample_lambda(const MixupConfig& cfg, std::mt19937_64& rng);

// Drops entries below eps (>= eps survives) and zeroes the diagonal.
Matrix prune_weak_edges(Matrix a, double eps);
// Replaces every nonzero entry with 1.
Matrix binarize_edges(Matrix a);

// Generates one labeled graph from a pair: node features and labels are
// interpolated directly, structures are interpolated in the GSAE embedding
// space and decoded back into an adjacency matrix, which is then pruned and
// (for binary datasets) binarized. Deterministic given (weights, inputs,
// lambda, seed).
Graph dual_mixup(const GsaeModel& gsae, const Graph& gi, const Graph& gj, double lambda,
                 const MixupConfig& cfg, std::uint64_t seed);

}  // namespace gdm
