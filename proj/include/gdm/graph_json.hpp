#pragma once

#include <string>
#include <vector>

#include "gdm/graph.hpp"
#include "gdm/sampling.hpp"

namespace gdm {

// JSON graph-set container used for generated graphs (soft labels and
// weighted adjacencies survive exactly; JSON doubles are emitted with
// shortest-round-trip precision). The provenance sidecar holds one record
// per generated graph: subset, source indices, lambda, and mixup seed.
void save_graph_set_json(const std::vector<GeneratedGraph>& set, Index feature_dim,
                         Index class_count, const std::string& path);
std::vector<GeneratedGraph> load_graph_set_json(const std::string& path);

void save_provenance_json(const std::vector<GeneratedGraph>& set, const std::string& path);

}  // namespace gdm
