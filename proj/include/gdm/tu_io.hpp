#pragma once

#include <string>

#include "gdm/graph.hpp"

namespace gdm {

// Loads a dataset laid out in the TU benchmark text format from
// `root/name/`:
//   {name}_A.txt               comma-separated 1-based "src, dst" pairs
//   {name}_graph_indicator.txt one 1-based graph id per node line
//   {name}_graph_labels.txt    one integer per graph
//   {name}_node_labels.txt     (optional) one integer per node
//   {name}_node_attributes.txt (optional) comma-separated reals per node
//
// Node features are taken from node attributes when present, else one-hot
// encoded node labels, else a single constant 1.0 feature. Graph labels are
// remapped to contiguous 0..C-1 (ascending original value) and one-hot
// encoded. Duplicate edges are collapsed, self-loops dropped with a
// warning, and the adjacency is symmetrized.
//
// Throws DataError naming the missing file or the offending line.
GraphDataset load_tu_dataset(const std::string& root, const std::string& name);

// Writes `ds` back out in the same format under `root/ds.name/`. Each
// undirected edge is emitted in both directions; features go to
// _node_attributes.txt and labels to _graph_labels.txt as class indices.
void save_tu_dataset(const GraphDataset& ds, const std::string& root);

}  // namespace gdm
