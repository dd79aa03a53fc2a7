#include "gdm/checkpoint.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

#include "gdm/fsio.hpp"

namespace gdm {
namespace {

constexpr const char* kMagic = "gdm-weights";
constexpr int kVersion = 1;

void write_matrix(std::ostringstream& out, const std::string& name, const Matrix& m) {
  out << "tensor " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%a", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

struct Parser {
  std::istringstream in;
  std::string path;

  explicit Parser(const std::string& file) : in(read_file(file)), path(file) {}

  std::string next_token() {
    std::string tok;
    if (!(in >> tok)) throw DataError(path + ": truncated checkpoint");
    return tok;
  }

  long next_int() {
    try {
      return std::stol(next_token());
    } catch (const std::exception&) {
      throw DataError(path + ": expected integer");
    }
  }

  void expect(const std::string& key) {
    const std::string tok = next_token();
    if (tok != key) throw DataError(path + ": expected '" + key + "', found '" + tok + "'");
  }

  Matrix read_matrix(const std::string& name, Index rows, Index cols) {
    expect("tensor");
    expect(name);
    if (next_int() != rows || next_int() != cols)
      throw DataError(path + ": tensor '" + name + "' has unexpected shape");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) {
        const std::string tok = next_token();
        char* end = nullptr;
        m(i, j) = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
          throw DataError(path + ": bad value '" + tok + "' in tensor '" + name + "'");
      }
    return m;
  }

  void read_header(const std::string& kind) {
    expect(kMagic);
    if (next_int() != kVersion) throw DataError(path + ": unsupported checkpoint version");
    expect("kind");
    expect(kind);
  }
};

}  // namespace

void save_classifier(const ClassifierModel& model, const std::string& path) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind classifier\n";
  out << "readout " << to_string(model.readout()) << '\n';
  out << "input_dim " << model.input_dim() << '\n';
  out << "hidden_dim " << model.hidden_dim() << '\n';
  out << "class_count " << model.class_count() << '\n';
  out << "mp_layers " << model.mp_layer_count() << '\n';
  for (int l = 0; l < model.mp_layer_count(); ++l) {
    const auto& layer = model.mp_layers()[static_cast<std::size_t>(l)];
    const std::string base = "mp" + std::to_string(l);
    write_matrix(out, base + ".weight", layer.weight.value());
    write_matrix(out, base + ".bias", layer.bias.value());
  }
  write_matrix(out, "head1.weight", model.head_hidden().weight.value());
  write_matrix(out, "head1.bias", model.head_hidden().bias.value());
  write_matrix(out, "head2.weight", model.head_out().weight.value());
  write_matrix(out, "head2.bias", model.head_out().bias.value());
  atomic_write_file(path, out.str());
}

ClassifierModel load_classifier(const std::string& path) {
  Parser p(path);
  p.read_header("classifier");
  p.expect("readout");
  const Readout readout = parse_readout(p.next_token());
  p.expect("input_dim");
  const Index input_dim = p.next_int();
  p.expect("hidden_dim");
  const Index hidden_dim = p.next_int();
  p.expect("class_count");
  const Index class_count = p.next_int();
  p.expect("mp_layers");
  const int mp_layers = static_cast<int>(p.next_int());

  ClassifierModel model(input_dim, hidden_dim, class_count, mp_layers, readout, 0);
  Index in = input_dim;
  for (int l = 0; l < mp_layers; ++l) {
    const std::string base = "mp" + std::to_string(l);
    auto& layer = model.mp_layers()[static_cast<std::size_t>(l)];
    layer.weight.value() = p.read_matrix(base + ".weight", in, hidden_dim);
    layer.bias.value() = p.read_matrix(base + ".bias", 1, hidden_dim);
    in = hidden_dim;
  }
  model.head_hidden().weight.value() = p.read_matrix("head1.weight", hidden_dim, hidden_dim);
  model.head_hidden().bias.value() = p.read_matrix("head1.bias", 1, hidden_dim);
  model.head_out().weight.value() = p.read_matrix("head2.weight", hidden_dim, class_count);
  model.head_out().bias.value() = p.read_matrix("head2.bias", 1, class_count);
  return model;
}

void save_gsae(const GsaeModel& model, const std::string& path) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind gsae\n";
  out << "embed_dim " << model.embed_dim() << '\n';
  write_matrix(out, "enc1.weight", model.layer1().weight.value());
  write_matrix(out, "enc1.bias", model.layer1().bias.value());
  write_matrix(out, "enc2.weight", model.layer2().weight.value());
  write_matrix(out, "enc2.bias", model.layer2().bias.value());
  atomic_write_file(path, out.str());
}

GsaeModel load_gsae(const std::string& path) {
  Parser p(path);
  p.read_header("gsae");
  p.expect("embed_dim");
  const Index embed_dim = p.next_int();
  GsaeModel model(embed_dim, 0);
  model.layer1().weight.value() = p.read_matrix("enc1.weight", 1, embed_dim);
  model.layer1().bias.value() = p.read_matrix("enc1.bias", 1, embed_dim);
  model.layer2().weight.value() = p.read_matrix("enc2.weight", embed_dim, embed_dim);
  model.layer2().bias.value() = p.read_matrix("enc2.bias", 1, embed_dim);
  return model;
}

}  // namespace gdm
