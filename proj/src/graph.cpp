#include "gdm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gdm/rng.hpp"

namespace gdm {

std::vector<std::pair<Index, Index>> Graph::edges() const {
  std::vector<std::pair<Index, Index>> out;
  const Index n = adjacency.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (adjacency(i, j) != 0.0) out.emplace_back(i, j);
  return out;
}

void Graph::validate(bool require_symmetric, double label_tol) const {
  const Index nn = adjacency.rows();
  if (nn < 1) throw std::invalid_argument("graph: node count must be >= 1");
  if (adjacency.cols() != nn)
    throw std::invalid_argument("graph: adjacency must be square");
  if (node_features.rows() != nn)
    throw std::invalid_argument("graph: node_features row count must equal node count");
  if (!adjacency.allFinite() || !node_features.allFinite() || !label.allFinite())
    throw std::invalid_argument("graph: non-finite entries");
  if ((adjacency.array() < 0.0).any())
    throw std::invalid_argument("graph: adjacency entries must be non-negative");
  if (adjacency.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("graph: self-loops are not stored");
  if (require_symmetric && !adjacency.isApprox(adjacency.transpose(), 0.0))
    throw std::invalid_argument("graph: adjacency must be symmetric");
  if (label.size() < 1) throw std::invalid_argument("graph: empty label vector");
  if ((label.array() < 0.0).any())
    throw std::invalid_argument("graph: label entries must be non-negative");
  if (std::abs(label.sum() - 1.0) > label_tol)
    throw std::invalid_argument("graph: label must sum to 1");
}

Vector degrees(const Graph& g) { return g.adjacency.rowwise().sum(); }

Graph pad_to(const Graph& g, Index target_n) {
  const Index n = g.n();
  if (target_n < n)
    throw std::invalid_argument("pad_to: target_n smaller than current node count");
  if (target_n == n) return g;
  Graph out;
  out.node_features = Matrix::Zero(target_n, g.node_features.cols());
  out.node_features.topRows(n) = g.node_features;
  out.adjacency = Matrix::Zero(target_n, target_n);
  out.adjacency.topLeftCorner(n, n) = g.adjacency;
  out.label = g.label;
  return out;
}

Graph permute_nodes(const Graph& g, const std::vector<Index>& perm) {
  const Index n = g.n();
  if (static_cast<Index>(perm.size()) != n)
    throw std::invalid_argument("permute_nodes: permutation size mismatch");
  Graph out;
  out.node_features = Matrix(n, g.node_features.cols());
  out.adjacency = Matrix(n, n);
  out.label = g.label;
  // Row i of the output holds what was at perm[i] in the input.
  for (Index i = 0; i < n; ++i) out.node_features.row(i) = g.node_features.row(perm[i]);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out.adjacency(i, j) = g.adjacency(perm[i], perm[j]);
  return out;
}

Graph random_node_permutation(const Graph& g, std::uint64_t seed) {
  const Index n = g.n();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  auto rng = make_rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return permute_nodes(g, perm);
}

GraphDataset subset_dataset(const GraphDataset& ds, const std::vector<Index>& indices) {
  GraphDataset out;
  out.feature_dim = ds.feature_dim;
  out.class_count = ds.class_count;
  out.undirected = ds.undirected;
  out.name = ds.name;
  out.graphs.reserve(indices.size());
  for (Index i : indices) out.graphs.push_back(ds.graphs.at(static_cast<std::size_t>(i)));
  return out;
}

}  // namespace gdm
