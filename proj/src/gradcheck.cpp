#include "gdm/gradcheck.hpp"

#include <cmath>
#include <random>

#include "gdm/classifier.hpp"
#include "gdm/gsae.hpp"
#include "gdm/kernel_ops.hpp"
#include "gdm/rng.hpp"

namespace gdm {

double max_gradient_error(const LossBuilder& build, const std::vector<Matrix>& inputs,
                          double h) {
  // Analytic pass.
  std::vector<Tensor> params;
  params.reserve(inputs.size());
  for (const Matrix& m : inputs) params.push_back(Tensor::parameter(m));
  std::vector<Matrix> analytic;
  {
    Tape tape;
    Tensor loss = build(tape, params);
    tape.backward(loss);
    for (const Tensor& p : params)
      analytic.push_back(p.has_grad() ? p.grad() : Matrix::Zero(p.rows(), p.cols()));
  }

  const auto eval = [&](const std::vector<Matrix>& at) {
    std::vector<Tensor> consts;
    consts.reserve(at.size());
    for (const Matrix& m : at) consts.push_back(Tensor::constant(m));
    Tape tape;
    return build(tape, consts).value()(0, 0);
  };

  double worst = 0.0;
  std::vector<Matrix> probe = inputs;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (Index i = 0; i < inputs[k].rows(); ++i)
      for (Index j = 0; j < inputs[k].cols(); ++j) {
        const double saved = probe[k](i, j);
        probe[k](i, j) = saved + h;
        const double up = eval(probe);
        probe[k](i, j) = saved - h;
        const double down = eval(probe);
        probe[k](i, j) = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double a = analytic[k](i, j);
        const double err = std::abs(a - numeric) /
                           std::max({1.0, std::abs(a), std::abs(numeric)});
        worst = std::max(worst, err);
      }
  }
  return worst;
}

namespace {

struct Gen {
  std::mt19937_64 rng;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  Index dim(Index lo, Index hi) {
    std::uniform_int_distribution<Index> d(lo, hi);
    return d(rng);
  }

  // Uniform in (-2,2); entries with |x| < margin are pushed outward so the
  // finite-difference probe never crosses a relu/max kink.
  Matrix mat(Index r, Index c, double margin = 0.0) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) {
        double v = d(rng);
        if (margin > 0.0 && std::abs(v) < margin) v = v < 0.0 ? v - margin : v + margin;
        m(i, j) = v;
      }
    return m;
  }

  Matrix simplex_rows(Index r, Index c) {
    std::uniform_real_distribution<double> d(0.05, 1.0);
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i) {
      double sum = 0.0;
      for (Index j = 0; j < c; ++j) sum += (m(i, j) = d(rng));
      m.row(i) /= sum;
    }
    return m;
  }

  // Random symmetric binary adjacency, zero diagonal, at least one edge.
  Matrix adjacency(Index n) {
    std::bernoulli_distribution edge(0.5);
    Matrix a = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (edge(rng)) a(i, j) = a(j, i) = 1.0;
    if (n > 1 && a.sum() == 0.0) a(0, 1) = a(1, 0) = 1.0;
    return a;
  }
};

// Loss wrapper: weighting the op output by a fixed random matrix makes the
// upstream gradient non-uniform, which catches transposition mistakes.
Tensor weighted_sum(Tape& tape, const Tensor& t, const Matrix& weights) {
  return tape.sum_all(tape.multiply(t, Tensor::constant(weights)));
}

struct Check {
  std::string name;
  std::function<double(Gen&)> run;  // one random instance -> max rel error
};

std::vector<Check> build_checks() {
  std::vector<Check> checks;

  checks.push_back({"matmul", [](Gen& g) {
    const Index r = g.dim(1, 6), k = g.dim(1, 5), c = g.dim(1, 5);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.matmul(in[0], in[1]), w);
        },
        {g.mat(r, k), g.mat(k, c)});
  }});

  checks.push_back({"add", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.add(in[0], in[1]), w);
        },
        {g.mat(r, c), g.mat(r, c)});
  }});

  checks.push_back({"add_row_broadcast", [](Gen& g) {
    const Index r = g.dim(2, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.add(in[0], in[1]), w);
        },
        {g.mat(r, c), g.mat(1, c)});
  }});

  checks.push_back({"multiply", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.multiply(in[0], in[1]), w);
        },
        {g.mat(r, c), g.mat(r, c)});
  }});

  checks.push_back({"scale", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const double s = g.mat(1, 1)(0, 0);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.scale(in[0], s), w);
        },
        {g.mat(r, c)});
  }});

  checks.push_back({"relu", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.relu(in[0]), w);
        },
        {g.mat(r, c, 1e-3)});
  }});

  checks.push_back({"sigmoid", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.sigmoid(in[0]), w);
        },
        {g.mat(r, c)});
  }});

  checks.push_back({"transpose", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(c, r);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.transpose(in[0]), w);
        },
        {g.mat(r, c)});
  }});

  checks.push_back({"row_mean", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(1, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.row_mean(in[0]), w);
        },
        {g.mat(r, c)});
  }});

  checks.push_back({"row_sum", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(1, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.row_sum(in[0]), w);
        },
        {g.mat(r, c)});
  }});

  checks.push_back({"row_max", [](Gen& g) {
    const Index r = g.dim(2, 6), c = g.dim(1, 5);
    const Matrix w = g.mat(1, c);
    // spread rows apart so the argmax is stable under the probe step
    Matrix x = g.mat(r, c);
    for (Index i = 0; i < r; ++i) x.row(i).array() += 0.1 * static_cast<double>(i);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.row_max(in[0]), w);
        },
        {x});
  }});

  checks.push_back({"concat_rows", [](Gen& g) {
    const Index c = g.dim(1, 5);
    const Index r1 = g.dim(1, 3), r2 = g.dim(1, 3), r3 = g.dim(1, 3);
    const Matrix w = g.mat(r1 + r2 + r3, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.concat_rows({in[0], in[1], in[2]}), w);
        },
        {g.mat(r1, c), g.mat(r2, c), g.mat(r3, c)});
  }});

  checks.push_back({"log_softmax", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(2, 5);
    const Matrix w = g.mat(r, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return weighted_sum(t, t.log_softmax(in[0]), w);
        },
        {g.mat(r, c)});
  }});

  checks.push_back({"sum_all", [](Gen& g) {
    const Index r = g.dim(1, 6), c = g.dim(1, 5);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) { return t.sum_all(in[0]); },
        {g.mat(r, c)});
  }});

  // Composite: soft-target cross-entropy through log-softmax, gradient
  // taken w.r.t. the raw logits.
  checks.push_back({"soft_cross_entropy", [](Gen& g) {
    const Index b = g.dim(1, 6), c = g.dim(2, 5);
    const Matrix targets = g.simplex_rows(b, c);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          return soft_cross_entropy(t, t.log_softmax(in[0]), targets);
        },
        {g.mat(b, c)});
  }});

  // Composite: negative-sampled structure reconstruction loss, gradient
  // taken w.r.t. all encoder parameters on a random small graph.
  checks.push_back({"reconstruction_loss", [](Gen& g) {
    const Index n = g.dim(3, 6);
    const Index ds = 3;
    Graph graph;
    graph.adjacency = g.adjacency(n);
    graph.node_features = Matrix::Ones(n, 1);
    graph.label = Vector::Ones(1);
    auto neg_rng = make_rng(g.rng());
    const NegativeEdgeSample neg = sample_negative_edges(graph, neg_rng);
    // moderate weights keep sigma(H H^T) away from the log clamps, where
    // the loss is flat and finite differences are uninformative
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          GsaeModel m(ds, 1);
          m.layer1().weight = in[0];
          m.layer1().bias = in[1];
          m.layer2().weight = in[2];
          m.layer2().bias = in[3];
          return reconstruction_loss_taped(t, m, graph, neg);
        },
        {g.mat(1, ds) * 0.3, g.mat(1, ds) * 0.3, g.mat(ds, ds) * 0.3, g.mat(1, ds) * 0.3});
  }});

  // End-to-end classifier: message passing, readout, head, log-softmax and
  // the cross-entropy composite, w.r.t. every parameter.
  checks.push_back({"classifier_end_to_end", [](Gen& g) {
    const Index n = g.dim(2, 6), d = g.dim(1, 3), hidden = 4, classes = 2;
    Graph graph;
    graph.adjacency = g.adjacency(n);
    graph.node_features = g.mat(n, d);
    graph.label = Vector::Zero(classes);
    graph.label(0) = 1.0;
    const Matrix targets = g.simplex_rows(1, classes);
    return max_gradient_error(
        [&](Tape& t, const std::vector<Tensor>& in) {
          ClassifierModel m(d, hidden, classes, 2, Readout::Mean, 1);
          m.mp_layers()[0].weight = in[0];
          m.mp_layers()[0].bias = in[1];
          m.mp_layers()[1].weight = in[2];
          m.mp_layers()[1].bias = in[3];
          m.head_hidden().weight = in[4];
          m.head_hidden().bias = in[5];
          m.head_out().weight = in[6];
          m.head_out().bias = in[7];
          return soft_cross_entropy(t, m.forward_log_probs(t, graph), targets);
        },
        {g.mat(d, hidden), g.mat(1, hidden), g.mat(hidden, hidden), g.mat(1, hidden),
         g.mat(hidden, hidden), g.mat(1, hidden), g.mat(hidden, classes), g.mat(1, classes)});
  }});

  return checks;
}

}  // namespace

std::vector<GradCheckResult> run_gradient_checks(std::uint64_t seed, int instances, double tol) {
  std::vector<GradCheckResult> results;
  Gen gen(seed);
  for (const Check& check : build_checks()) {
    GradCheckResult r;
    r.name = check.name;
    for (int i = 0; i < instances; ++i)
      r.max_rel_error = std::max(r.max_rel_error, check.run(gen));
    r.pass = r.max_rel_error <= tol;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace gdm
