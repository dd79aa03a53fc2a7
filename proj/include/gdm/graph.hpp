#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gdm/types.hpp"

namespace gdm {

// One labeled graph: node features X (n x d), adjacency A (n x n, zero
// diagonal), and a label vector on the probability simplex (one-hot for
// originals, soft for generated graphs). Immutable by convention after
// construction.
struct Graph {
  Matrix node_features;  // n x d
  Matrix adjacency;      // n x n, entries >= 0, no self-loops
  Vector label;          // length C, entries >= 0, sums to 1

  Index n() const { return adjacency.rows(); }
  Index feature_dim() const { return node_features.cols(); }
  Index class_count() const { return label.size(); }

  // Upper-triangle (i < j) node pairs with nonzero adjacency weight.
  std::vector<std::pair<Index, Index>> edges() const;
  Index edge_count() const { return static_cast<Index>(edges().size()); }

  // Throws std::invalid_argument when a structural invariant is broken:
  // non-square adjacency, row-count mismatch, self-loops, negative
  // weights, or a label off the simplex by more than tol.
  void validate(bool require_symmetric = true, double label_tol = 1e-9) const;
};

struct GraphDataset {
  std::vector<Graph> graphs;
  Index feature_dim = 0;
  Index class_count = 0;
  bool undirected = true;
  std::string name;

  Index size() const { return static_cast<Index>(graphs.size()); }
};

// Row sums of the adjacency matrix. For binary undirected graphs this is
// the node degree; for weighted graphs it is the weighted degree.
Vector degrees(const Graph& g);

// Extends g with zero feature rows and zero adjacency rows/columns until it
// has target_n nodes. Label is unchanged. target_n < g.n() is a contract
// violation.
Graph pad_to(const Graph& g, Index target_n);

// Applies one permutation to the rows of X and to the rows and columns of A.
Graph permute_nodes(const Graph& g, const std::vector<Index>& perm);

// Draws a uniformly random permutation from seed and applies it.
Graph random_node_permutation(const Graph& g, std::uint64_t seed);

// Restricts the dataset to the given graph indices (metadata preserved).
GraphDataset subset_dataset(const GraphDataset& ds, const std::vector<Index>& indices);

}  // namespace gdm
