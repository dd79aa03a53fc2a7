#include "gdm/graph_json.hpp"

#include <nlohmann/json.hpp>

#include "gdm/fsio.hpp"

using nlohmann::json;

namespace gdm {
namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty())
    throw DataError("graph set: '" + what + "' must be a non-empty array");
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows[0].size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != c)
      throw DataError("graph set: ragged rows in '" + what + "'");
    for (Index j = 0; j < c; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

}  // namespace

void save_graph_set_json(const std::vector<GeneratedGraph>& set, Index feature_dim,
                         Index class_count, const std::string& path) {
  json root;
  root["format"] = "gdm-graphset";
  root["version"] = 1;
  root["feature_dim"] = feature_dim;
  root["class_count"] = class_count;
  json graphs = json::array();
  for (const GeneratedGraph& g : set) {
    json item;
    item["n"] = g.graph.n();
    item["features"] = matrix_to_json(g.graph.node_features);
    item["adjacency"] = matrix_to_json(g.graph.adjacency);
    json label = json::array();
    for (Index c = 0; c < g.graph.label.size(); ++c) label.push_back(g.graph.label(c));
    item["label"] = std::move(label);
    item["provenance"] = {{"subset", g.subset},
                          {"source_i", g.source_i},
                          {"source_j", g.source_j},
                          {"lambda", g.lambda},
                          {"mix_seed", g.mix_seed}};
    graphs.push_back(std::move(item));
  }
  root["graphs"] = std::move(graphs);
  atomic_write_file(path, root.dump(2) + "\n");
}

std::vector<GeneratedGraph> load_graph_set_json(const std::string& path) {
  json root;
  try {
    root = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  if (root.value("format", "") != "gdm-graphset")
    throw DataError(path + ": not a gdm graph set");
  std::vector<GeneratedGraph> out;
  for (const json& item : root.at("graphs")) {
    GeneratedGraph g;
    g.graph.node_features = matrix_from_json(item.at("features"), "features");
    g.graph.adjacency = matrix_from_json(item.at("adjacency"), "adjacency");
    const json& label = item.at("label");
    g.graph.label = Vector(static_cast<Index>(label.size()));
    for (std::size_t c = 0; c < label.size(); ++c)
      g.graph.label(static_cast<Index>(c)) = label[c].get<double>();
    if (item.contains("provenance")) {
      const json& prov = item["provenance"];
      g.subset = prov.value("subset", "");
      g.source_i = prov.value("source_i", Index{-1});
      g.source_j = prov.value("source_j", Index{-1});
      g.lambda = prov.value("lambda", 0.0);
      g.mix_seed = prov.value("mix_seed", std::uint64_t{0});
    }
    out.push_back(std::move(g));
  }
  return out;
}

void save_provenance_json(const std::vector<GeneratedGraph>& set, const std::string& path) {
  json records = json::array();
  for (const GeneratedGraph& g : set)
    records.push_back({{"subset", g.subset},
                       {"source_i", g.source_i},
                       {"source_j", g.source_j},
                       {"lambda", g.lambda},
                       {"mix_seed", g.mix_seed},
                       {"n", g.graph.n()}});
  atomic_write_file(path, records.dump(2) + "\n");
}

}  // namespace gdm
