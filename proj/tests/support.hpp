#pragma once

// Synthetic graph generators shared by the unit and acceptance suites.

#include <random>
#include <vector>

#include "gdm/graph.hpp"

namespace gdm::testsupport {

inline Vector one_hot(Index c, Index classes) {
  Vector v = Vector::Zero(classes);
  v(c) = 1.0;
  return v;
}

inline Graph from_adjacency(Matrix adj, Vector label) {
  Graph g;
  g.node_features = adj.rowwise().sum();  // degree feature, d = 1
  g.adjacency = std::move(adj);
  g.label = std::move(label);
  return g;
}

inline Graph ring_graph(Index n, Vector label) {
  Matrix adj = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Index j = (i + 1) % n;
    if (i != j) adj(i, j) = adj(j, i) = 1.0;
  }
  return from_adjacency(std::move(adj), std::move(label));
}

inline Graph star_graph(Index n, Vector label) {
  Matrix adj = Matrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) adj(0, i) = adj(i, 0) = 1.0;
  return from_adjacency(std::move(adj), std::move(label));
}

inline Graph erdos_renyi_graph(Index n, double p, Vector label, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  Matrix adj = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (edge(rng)) adj(i, j) = adj(j, i) = 1.0;
  return from_adjacency(std::move(adj), std::move(label));
}

// 20 rings vs 20 stars with degree features; trivially separable.
inline GraphDataset rings_and_stars(Index count_per_class = 20, Index n_min = 6,
                                    Index n_max = 12, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> size(n_min, n_max);
  GraphDataset ds;
  ds.feature_dim = 1;
  ds.class_count = 2;
  ds.name = "rings-and-stars";
  for (Index i = 0; i < count_per_class; ++i) {
    ds.graphs.push_back(ring_graph(size(rng), one_hot(0, 2)));
    ds.graphs.push_back(star_graph(size(rng), one_hot(1, 2)));
  }
  return ds;
}

// Binary task: sparse (p = 0.2) vs dense (p = 0.5) random graphs,
// n in [10, 20], degree features.
inline GraphDataset density_benchmark(Index count_per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> size(10, 20);
  GraphDataset ds;
  ds.feature_dim = 1;
  ds.class_count = 2;
  ds.name = "density-benchmark";
  for (Index i = 0; i < count_per_class; ++i) {
    ds.graphs.push_back(erdos_renyi_graph(size(rng), 0.2, one_hot(0, 2), rng));
    ds.graphs.push_back(erdos_renyi_graph(size(rng), 0.5, one_hot(1, 2), rng));
  }
  return ds;
}

}  // namespace gdm::testsupport
