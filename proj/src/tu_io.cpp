#include "gdm/tu_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;

namespace gdm {
namespace {

std::vector<std::string> read_lines(const fs::path& path, bool mandatory) {
  std::ifstream in(path);
  if (!in) {
    if (mandatory) throw DataError("missing dataset file: " + path.string());
    return {};
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // Trailing blank lines are common in published TU files.
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos)
    lines.pop_back();
  return lines;
}

std::vector<double> parse_csv_row(const fs::path& file, std::size_t lineno,
                                  const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw DataError(file.string() + ":" + std::to_string(lineno) +
                      ": cannot parse value '" + cell + "'");
    }
  }
  if (out.empty())
    throw DataError(file.string() + ":" + std::to_string(lineno) + ": empty row");
  return out;
}

long parse_int(const fs::path& file, std::size_t lineno, const std::string& text) {
  try {
    std::size_t pos = 0;
    long v = std::stol(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError(file.string() + ":" + std::to_string(lineno) +
                    ": cannot parse integer '" + text + "'");
  }
}

}  // namespace

GraphDataset load_tu_dataset(const std::string& root, const std::string& name) {
  const fs::path dir = fs::path(root) / name;
  const fs::path a_file = dir / (name + "_A.txt");
  const fs::path ind_file = dir / (name + "_graph_indicator.txt");
  const fs::path glab_file = dir / (name + "_graph_labels.txt");
  const fs::path nlab_file = dir / (name + "_node_labels.txt");
  const fs::path nattr_file = dir / (name + "_node_attributes.txt");

  const auto ind_lines = read_lines(ind_file, true);
  const auto glab_lines = read_lines(glab_file, true);
  const auto a_lines = read_lines(a_file, true);

  const Index total_nodes = static_cast<Index>(ind_lines.size());
  const Index num_graphs = static_cast<Index>(glab_lines.size());
  if (num_graphs < 1) throw DataError(glab_file.string() + ": no graphs");

  // Global node id (0-based) -> graph id (0-based) and local node index.
  std::vector<Index> node_graph(static_cast<std::size_t>(total_nodes));
  std::vector<Index> node_local(static_cast<std::size_t>(total_nodes));
  std::vector<Index> graph_size(static_cast<std::size_t>(num_graphs), 0);
  for (Index v = 0; v < total_nodes; ++v) {
    const long gid = parse_int(ind_file, static_cast<std::size_t>(v) + 1,
                               ind_lines[static_cast<std::size_t>(v)]);
    if (gid < 1 || gid > num_graphs)
      throw DataError(ind_file.string() + ":" + std::to_string(v + 1) +
                      ": graph id " + std::to_string(gid) + " out of range");
    node_graph[static_cast<std::size_t>(v)] = gid - 1;
    node_local[static_cast<std::size_t>(v)] = graph_size[static_cast<std::size_t>(gid - 1)]++;
  }
  for (Index g = 0; g < num_graphs; ++g)
    if (graph_size[static_cast<std::size_t>(g)] == 0)
      throw DataError(ind_file.string() + ": graph " + std::to_string(g + 1) + " has no nodes");

  // Graph labels -> contiguous 0..C-1 by ascending original value.
  std::vector<long> raw_labels(static_cast<std::size_t>(num_graphs));
  std::set<long> label_values;
  for (Index g = 0; g < num_graphs; ++g) {
    raw_labels[static_cast<std::size_t>(g)] =
        parse_int(glab_file, static_cast<std::size_t>(g) + 1, glab_lines[static_cast<std::size_t>(g)]);
    label_values.insert(raw_labels[static_cast<std::size_t>(g)]);
  }
  std::map<long, Index> label_map;
  Index next_class = 0;
  for (long v : label_values) label_map[v] = next_class++;
  const Index class_count = next_class;

  // Node features: attributes > one-hot node labels > constant 1.0.
  Matrix features;  // total_nodes x d
  const auto nattr_lines = read_lines(nattr_file, false);
  if (!nattr_lines.empty()) {
    if (static_cast<Index>(nattr_lines.size()) != total_nodes)
      throw DataError(nattr_file.string() + ": expected " + std::to_string(total_nodes) +
                      " rows, found " + std::to_string(nattr_lines.size()));
    const auto first = parse_csv_row(nattr_file, 1, nattr_lines[0]);
    const Index d = static_cast<Index>(first.size());
    features.resize(total_nodes, d);
    for (Index v = 0; v < total_nodes; ++v) {
      const auto row = parse_csv_row(nattr_file, static_cast<std::size_t>(v) + 1,
                                     nattr_lines[static_cast<std::size_t>(v)]);
      if (static_cast<Index>(row.size()) != d)
        throw DataError(nattr_file.string() + ":" + std::to_string(v + 1) +
                        ": inconsistent attribute width");
      for (Index c = 0; c < d; ++c) features(v, c) = row[static_cast<std::size_t>(c)];
    }
  } else {
    const auto nlab_lines = read_lines(nlab_file, false);
    if (!nlab_lines.empty()) {
      if (static_cast<Index>(nlab_lines.size()) != total_nodes)
        throw DataError(nlab_file.string() + ": expected " + std::to_string(total_nodes) +
                        " rows, found " + std::to_string(nlab_lines.size()));
      std::vector<long> raw(static_cast<std::size_t>(total_nodes));
      std::set<long> values;
      for (Index v = 0; v < total_nodes; ++v) {
        raw[static_cast<std::size_t>(v)] =
            parse_int(nlab_file, static_cast<std::size_t>(v) + 1, nlab_lines[static_cast<std::size_t>(v)]);
        values.insert(raw[static_cast<std::size_t>(v)]);
      }
      std::map<long, Index> value_map;
      Index next = 0;
      for (long v : values) value_map[v] = next++;
      features = Matrix::Zero(total_nodes, next);
      for (Index v = 0; v < total_nodes; ++v)
        features(v, value_map[raw[static_cast<std::size_t>(v)]]) = 1.0;
    } else {
      features = Matrix::Ones(total_nodes, 1);
    }
  }

  // Assemble per-graph matrices.
  GraphDataset ds;
  ds.name = name;
  ds.undirected = true;
  ds.feature_dim = features.cols();
  ds.class_count = class_count;
  ds.graphs.resize(static_cast<std::size_t>(num_graphs));
  for (Index g = 0; g < num_graphs; ++g) {
    Graph& graph = ds.graphs[static_cast<std::size_t>(g)];
    const Index n = graph_size[static_cast<std::size_t>(g)];
    graph.node_features = Matrix::Zero(n, ds.feature_dim);
    graph.adjacency = Matrix::Zero(n, n);
    graph.label = Vector::Zero(class_count);
    graph.label(label_map[raw_labels[static_cast<std::size_t>(g)]]) = 1.0;
  }
  for (Index v = 0; v < total_nodes; ++v)
    ds.graphs[static_cast<std::size_t>(node_graph[static_cast<std::size_t>(v)])]
        .node_features.row(node_local[static_cast<std::size_t>(v)]) = features.row(v);

  std::size_t dropped_self_loops = 0;
  for (std::size_t lineno = 1; lineno <= a_lines.size(); ++lineno) {
    const auto pair = parse_csv_row(a_file, lineno, a_lines[lineno - 1]);
    if (pair.size() != 2)
      throw DataError(a_file.string() + ":" + std::to_string(lineno) +
                      ": expected 'src, dst'");
    const long src = static_cast<long>(pair[0]);
    const long dst = static_cast<long>(pair[1]);
    if (src < 1 || src > total_nodes || dst < 1 || dst > total_nodes)
      throw DataError(a_file.string() + ":" + std::to_string(lineno) +
                      ": node index out of range");
    const Index u = static_cast<Index>(src - 1);
    const Index w = static_cast<Index>(dst - 1);
    if (node_graph[static_cast<std::size_t>(u)] != node_graph[static_cast<std::size_t>(w)])
      throw DataError(a_file.string() + ":" + std::to_string(lineno) +
                      ": edge connects nodes of different graphs");
    if (u == w) {
      ++dropped_self_loops;
      continue;
    }
    Graph& graph = ds.graphs[static_cast<std::size_t>(node_graph[static_cast<std::size_t>(u)])];
    const Index lu = node_local[static_cast<std::size_t>(u)];
    const Index lw = node_local[static_cast<std::size_t>(w)];
    graph.adjacency(lu, lw) = 1.0;
    graph.adjacency(lw, lu) = 1.0;
  }
  if (dropped_self_loops > 0)
    std::cerr << "[warn] " << name << ": dropped " << dropped_self_loops
              << " self-loop(s) from " << a_file.string() << "\n";

  for (const Graph& g : ds.graphs) g.validate();
  return ds;
}

void save_tu_dataset(const GraphDataset& ds, const std::string& root) {
  const fs::path dir = fs::path(root) / ds.name;
  fs::create_directories(dir);
  std::ofstream a_out(dir / (ds.name + "_A.txt"));
  std::ofstream ind_out(dir / (ds.name + "_graph_indicator.txt"));
  std::ofstream glab_out(dir / (ds.name + "_graph_labels.txt"));
  std::ofstream nattr_out(dir / (ds.name + "_node_attributes.txt"));
  if (!a_out || !ind_out || !glab_out || !nattr_out)
    throw DataError("cannot write dataset under " + dir.string());
  nattr_out.precision(17);

  Index node_base = 1;  // TU node ids are 1-based and global
  for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
    const Graph& g = ds.graphs[gi];
    const Index n = g.n();
    for (Index v = 0; v < n; ++v) {
      ind_out << (gi + 1) << "\n";
      for (Index c = 0; c < g.node_features.cols(); ++c) {
        if (c > 0) nattr_out << ", ";
        nattr_out << g.node_features(v, c);
      }
      nattr_out << "\n";
    }
    Index best = 0;
    g.label.maxCoeff(&best);
    glab_out << best << "\n";
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j && g.adjacency(i, j) != 0.0)
          a_out << (node_base + i) << ", " << (node_base + j) << "\n";
    node_base += n;
  }
}

}  // namespace gdm
