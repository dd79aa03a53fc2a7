// Acceptance suite: one self-contained check per numbered criterion, each
// printing a single [PASS]/[FAIL]/[SKIP] line. Exit code is nonzero when a
// gating criterion fails. Criterion 8 is informational and never gates.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gdm/classifier.hpp"
#include "gdm/fsio.hpp"
#include "gdm/gradcheck.hpp"
#include "gdm/gsae.hpp"
#include "gdm/mixup.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/rng.hpp"
#include "gdm/sampling.hpp"
#include "gdm/tu_io.hpp"
#include "support.hpp"

using namespace gdm;
using namespace gdm::testsupport;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  bool skipped = false;
  bool gating = true;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

class Timer {
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
};

void report(const Criterion& c) {
  const char* tag = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
  std::printf("[%s] criterion %d: %s (%.1fs / budget %.0fs)%s%s\n", tag, c.id, c.name.c_str(),
              c.seconds, c.budget_seconds, c.detail.empty() ? "" : " -- ", c.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness: primitives + both composite losses vs central
//    finite differences (h = 1e-5), rel. error <= 1e-4, >= 10 instances.
Criterion criterion_gradients() {
  Criterion c{1, "gradient correctness vs finite differences"};
  c.budget_seconds = 30.0;
  Timer t;
  const auto results = run_gradient_checks(/*seed=*/20240901, /*instances=*/10, /*tol=*/1e-4);
  double worst = 0.0;
  std::string worst_name;
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    if (r.max_rel_error > worst) {
      worst = r.max_rel_error;
      worst_name = r.name;
    }
  }
  c.seconds = t.seconds();
  c.pass = all && c.seconds < c.budget_seconds;
  c.detail = fmt("%zu checks, worst rel err %.2e (%s)", results.size(), worst,
                 worst_name.c_str());
  return c;
}

// ---------------------------------------------------------------------------
// 2. Mixup endpoint identity at lambda = 1 and lambda = 0 on 100 random
//    pairs: exact functional side, zero-error structural embedding.
Criterion criterion_mixup_endpoints() {
  Criterion c{2, "mixup endpoint identity"};
  c.budget_seconds = 10.0;
  Timer t;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Index> size(3, 12);
  std::uniform_real_distribution<double> feat(-2.0, 2.0);
  MixupConfig cfg;
  cfg.permute_nodes = false;  // identity alignment isolates the arithmetic
  const GsaeModel gsae(16, 5);

  bool ok = true;
  for (int round = 0; round < 100 && ok; ++round) {
    Graph gi = erdos_renyi_graph(size(rng), 0.4, one_hot(0, 2), rng);
    Graph gj = erdos_renyi_graph(size(rng), 0.4, one_hot(1, 2), rng);
    const Index d = 3;
    gi.node_features = Matrix::NullaryExpr(gi.n(), d, [&]() { return feat(rng); });
    gj.node_features = Matrix::NullaryExpr(gj.n(), d, [&]() { return feat(rng); });
    const Index target = std::max(gi.n(), gj.n());
    const Graph pi = pad_to(gi, target);
    const Graph pj = pad_to(gj, target);
    const Matrix hi = gsae.encode(pi);
    const Matrix hj = gsae.encode(pj);

    const Graph at1 = dual_mixup(gsae, gi, gj, 1.0, cfg, 9);
    ok = ok && at1.node_features == pi.node_features && at1.label == pi.label;
    ok = ok && (1.0 * hi + 0.0 * hj) == hi;  // zero-error embedding identity
    Matrix adj1 = prune_weak_edges(decode_embedding(hi), cfg.epsilon);
    ok = ok && at1.adjacency == binarize_edges(adj1);

    const Graph at0 = dual_mixup(gsae, gi, gj, 0.0, cfg, 9);
    ok = ok && at0.node_features == pj.node_features && at0.label == pj.label;
    ok = ok && (0.0 * hi + 1.0 * hj) == hj;
    Matrix adj0 = prune_weak_edges(decode_embedding(hj), cfg.epsilon);
    ok = ok && at0.adjacency == binarize_edges(adj0);
  }
  c.seconds = t.seconds();
  c.pass = ok && c.seconds < c.budget_seconds;
  c.detail = ok ? "100 pairs exact at both endpoints" : "endpoint mismatch";
  return c;
}

// ---------------------------------------------------------------------------
// 3. Structural decoding contracts over 1000 random embeddings.
Criterion criterion_decode_contracts() {
  Criterion c{3, "structural decoding contracts"};
  c.budget_seconds = 10.0;
  Timer t;
  std::mt19937_64 rng(31);
  // amplitude keeps |h_i . h_j| <= ~18, so sigma stays strictly inside
  // (0,1) in double precision instead of rounding to exactly 1
  std::uniform_int_distribution<Index> nodes(1, 12), dims(1, 8);
  std::uniform_real_distribution<double> val(-1.5, 1.5);
  bool ok = true;
  for (int round = 0; round < 1000 && ok; ++round) {
    const Index n = nodes(rng), d = dims(rng);
    Matrix h = Matrix::NullaryExpr(n, d, [&]() { return val(rng); });
    const Matrix dec = decode_embedding(h);
    ok = ok && (dec - dec.transpose()).cwiseAbs().maxCoeff() == 0.0;
    ok = ok && (dec.array() > 0.0).all() && (dec.array() < 1.0).all();
    const Matrix pruned = prune_weak_edges(dec, 0.1);
    const Matrix bin = binarize_edges(pruned);
    ok = ok && ((bin.array() == 0.0) || (bin.array() == 1.0)).all();
    ok = ok && bin.diagonal().isZero();
    // nothing below the threshold survives
    for (Index i = 0; i < n && ok; ++i)
      for (Index j = 0; j < n && ok; ++j)
        if (i != j && dec(i, j) < 0.1) ok = bin(i, j) == 0.0;
  }
  c.seconds = t.seconds();
  c.pass = ok && c.seconds < c.budget_seconds;
  c.detail = ok ? "1000 embeddings clean" : "contract violated";
  return c;
}

// ---------------------------------------------------------------------------
// 4. Balanced-sampling oracle equivalence + median split + provenance audit.
Criterion criterion_sampling_oracle() {
  Criterion c{4, "balanced-sampling oracle equivalence"};
  c.budget_seconds = 30.0;
  Timer t;
  bool ok = true;
  std::string why;

  // (a) Acc tags vs an independent oracle on 200 random (p, y) pairs.
  {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Index> classes(2, 5);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int round = 0; round < 200 && ok; ++round) {
      const Index cc = classes(rng);
      Vector p(cc), y = Vector::Zero(cc);
      double sum = 0.0;
      for (Index k = 0; k < cc; ++k) sum += (p(k) = u(rng));
      p /= sum;
      y(std::uniform_int_distribution<Index>(0, cc - 1)(rng)) = 1.0;
      // oracle: independent scan for the first maximal entries
      Index bp = 0, by = 0;
      for (Index k = 1; k < cc; ++k) {
        if (p(k) > p(bp)) bp = k;
        if (y(k) > y(by)) by = k;
      }
      const Difficulty expected = bp == by ? Difficulty::Low : Difficulty::High;
      if (accuracy_difficulty(p, y) != expected) {
        ok = false;
        why = "acc tag diverged from the oracle";
      }
    }
  }

  // (b) Unc low-set size = ceil(N/2) for N in 1..50 with distinct entropies.
  if (ok) {
    std::mt19937_64 rng(13);
    const ClassifierModel model(1, 8, 2, 2, Readout::Mean, 3);
    Index checked = 0;
    for (Index n = 1; n <= 50 && ok; ++n) {
      GraphDataset ds;
      ds.feature_dim = 1;
      ds.class_count = 2;
      // distinct sizes keep the graphs non-isomorphic and entropies distinct
      for (Index i = 0; i < n; ++i)
        ds.graphs.push_back(erdos_renyi_graph(4 + i, 0.4, one_hot(0, 2), rng));
      const auto tags = assess_difficulty(model, ds, DifficultyPolicy::Unc);
      std::set<double> distinct;
      Index low = 0;
      for (const auto& tag : tags) {
        distinct.insert(tag.score);
        low += tag.level == Difficulty::Low ? 1 : 0;
      }
      if (static_cast<Index>(distinct.size()) != n) continue;  // entropy tie
      ++checked;
      if (low != (n + 1) / 2) {
        ok = false;
        why = fmt("unc split at N=%lld gave %lld low", static_cast<long long>(n),
                  static_cast<long long>(low));
      }
    }
    if (ok && checked < 40) {
      ok = false;
      why = "too many entropy ties to audit the median split";
    }
  }

  // (c) generate_balanced: exactly 3m graphs, audited pair provenance.
  if (ok) {
    const GraphDataset ds = rings_and_stars(6, 5, 10, 31);
    ClassifierModel model(1, 8, 2, 2, Readout::Mean, 17);
    train_classifier(model, ds.graphs, 60, 1e-2);
    const GsaeModel gsae(8, 5);
    for (DifficultyPolicy policy : {DifficultyPolicy::Acc, DifficultyPolicy::Unc}) {
      const auto tags = assess_difficulty(model, ds, policy);
      std::vector<Difficulty> level(static_cast<std::size_t>(ds.size()));
      for (const auto& tag : tags) level[static_cast<std::size_t>(tag.graph_index)] = tag.level;
      const Index m = 12;
      const auto generated = generate_balanced(gsae, ds, tags, MixupConfig{}, m, 2025);
      if (generated.size() != static_cast<std::size_t>(3 * m)) {
        ok = false;
        why = "generated count != 3m";
        break;
      }
      for (const GeneratedGraph& g : generated) {
        const Difficulty di = level[static_cast<std::size_t>(g.source_i)];
        const Difficulty dj = level[static_cast<std::size_t>(g.source_j)];
        const bool good =
            (g.subset == "low" && di == Difficulty::Low && dj == Difficulty::Low) ||
            (g.subset == "med" && ((di == Difficulty::Low && dj == Difficulty::High) ||
                                   (di == Difficulty::High && dj == Difficulty::Low))) ||
            (g.subset == "high" && di == Difficulty::High && dj == Difficulty::High);
        if (!good) {
          ok = false;
          why = "provenance audit failed for subset " + g.subset;
          break;
        }
      }
      if (!ok) break;
    }
  }

  c.seconds = t.seconds();
  c.pass = ok && c.seconds < c.budget_seconds;
  c.detail = ok ? "oracle, median split, and provenance audits clean" : why;
  return c;
}

// ---------------------------------------------------------------------------
// 5. GSAE learning signal on 20 rings + 20 stars, n in [6,12]: loss down
//    >= 50% from epoch 1 and edge-vs-non-edge AUC >= 0.9, in >= 8/10 seeds.
//
//    Note: rings are vertex-transitive, so an equivariant structure-only
//    encoder decodes every within-ring pair to the same score; those
//    comparisons tie at 0.5 and cap the pooled AUC near 0.86 (within-graph
//    near 0.75). The same ties put a floor of 2n*ln(2) per ring under the
//    reconstruction loss, so from a neutral start (scores near 0.5, about
//    ln(2) per term at epoch 1) the reachable reduction is below 50% as
//    well. Both clauses are expected to fail; the numbers below make the
//    ceilings visible.
Criterion criterion_gsae_signal() {
  Criterion c{5, "gsae learning signal (rings vs stars)"};
  c.budget_seconds = 120.0;
  Timer t;
  int joint_ok = 0, loss_ok = 0;
  double worst_auc = 1.0, best_auc = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GraphDataset ds = rings_and_stars(20, 6, 12, 9000 + seed);
    GsaeModel model(32, mix_seed(seed, 1));
    const auto losses = train_gsae(model, ds, 200, 1e-2, mix_seed(seed, 2));
    const double reduction = 1.0 - losses.back() / losses.front();

    // pooled edge-vs-non-edge ranking AUC over all training graphs
    auto rng = make_rng(mix_seed(seed, 3));
    std::vector<double> pos, neg;
    for (const Graph& g : ds.graphs) {
      const Matrix dec = decode_embedding(model.encode(g));
      for (const auto& [i, j] : g.edges()) pos.push_back(dec(i, j));
      for (const auto& [i, j] : sample_negative_edges(g, rng).pairs) neg.push_back(dec(i, j));
    }
    double wins = 0.0;
    for (double p : pos)
      for (double q : neg) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
    const double auc = wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));

    worst_auc = std::min(worst_auc, auc);
    best_auc = std::max(best_auc, auc);
    loss_ok += reduction >= 0.5 ? 1 : 0;
    joint_ok += (reduction >= 0.5 && auc >= 0.9) ? 1 : 0;
  }
  c.seconds = t.seconds();
  c.pass = joint_ok >= 8 && c.seconds < c.budget_seconds;
  c.detail = fmt("joint ok %d/10 (loss halved %d/10, pooled auc range [%.3f, %.3f]; "
                 "exact within-ring ties cap the pooled auc near 0.86 and floor the "
                 "loss at 2n*ln2 per ring)",
                 joint_ok, loss_ok, worst_auc, best_auc);
  return c;
}

// ---------------------------------------------------------------------------
// 6. End-to-end low-label benefit on the density task, 5 labels per class,
//    10 seeds: paired mean accuracy difference >= -0.5 points.
Criterion criterion_low_label_benefit() {
  Criterion c{6, "end-to-end low-label benefit (gdm-acc vs baseline)"};
  c.budget_seconds = 900.0;
  Timer t;
  double gdm_sum = 0.0, base_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    // 250 graphs per class; the first 5 of each class are the labeled
    // training set, the remaining 490 form the held-out evaluation set
    const GraphDataset pool = density_benchmark(250, 40000 + seed * 17);
    std::vector<Index> by_class[2];
    for (Index i = 0; i < pool.size(); ++i)
      by_class[argmax_lowest(pool.graphs[static_cast<std::size_t>(i)].label)].push_back(i);
    std::vector<Index> labeled, test;
    for (auto& members : by_class) {
      labeled.insert(labeled.end(), members.begin(), members.begin() + 5);
      test.insert(test.end(), members.begin() + 5, members.end());
    }
    const GraphDataset train_set = subset_dataset(pool, labeled);
    const GraphDataset test_set = subset_dataset(pool, test);

    ExperimentConfig gdm_cfg;
    gdm_cfg.policy = "acc";
    ExperimentConfig base_cfg = gdm_cfg;
    base_cfg.augment = false;

    const PipelineResult gdm = run_gdm_pipeline(gdm_cfg, train_set, mix_seed(seed, 6));
    const PipelineResult base = run_gdm_pipeline(base_cfg, train_set, mix_seed(seed, 6));
    const double acc_gdm = evaluate_accuracy(gdm.model, test_set.graphs);
    const double acc_base = evaluate_accuracy(base.model, test_set.graphs);
    gdm_sum += acc_gdm;
    base_sum += acc_base;
    std::printf("  seed %llu: gdm-acc %.3f baseline %.3f (generated %zu)\n",
                static_cast<unsigned long long>(seed), acc_gdm, acc_base,
                gdm.generated.size());
    std::fflush(stdout);
  }
  const double margin = (gdm_sum - base_sum) / 10.0;
  c.seconds = t.seconds();
  c.pass = margin >= -0.005 && c.seconds < c.budget_seconds;
  c.detail = fmt("mean gdm %.3f vs baseline %.3f, paired margin %+.2f points",
                 gdm_sum / 10.0, base_sum / 10.0, margin * 100.0);
  return c;
}

// ---------------------------------------------------------------------------
// 7. Determinism and degeneration.
Criterion criterion_determinism() {
  Criterion c{7, "determinism and baseline degeneration"};
  c.budget_seconds = 120.0;
  Timer t;
  bool ok = true;
  std::string why;

  const GraphDataset ds = rings_and_stars(8, 5, 9, 44);

  // lambda_gdm = 0 with all subsets disabled == baseline, bitwise
  {
    ExperimentConfig disabled;
    disabled.hidden_dim = 16;
    disabled.mp_layers = 2;
    disabled.gsae_dim = 8;
    disabled.epochs = {20, 20, 60};
    disabled.lambda_gdm = 0.0;
    disabled.use_low = disabled.use_med = disabled.use_high = false;
    ExperimentConfig baseline = disabled;
    baseline.augment = false;
    const PipelineResult a = run_gdm_pipeline(disabled, ds, 777);
    const PipelineResult b = run_gdm_pipeline(baseline, ds, 777);
    if (a.main_losses != b.main_losses) {
      ok = false;
      why = "degenerate arm diverged from the baseline loss sequence";
    }
  }

  // identical configs and seeds give identical results.csv
  if (ok) {
    const fs::path tmp =
        fs::temp_directory_path() / ("gdm_accept_" + std::to_string(::getpid()));
    ExperimentConfig cfg;
    cfg.out_dir = (tmp / "a").string();
    cfg.hidden_dim = 16;
    cfg.mp_layers = 2;
    cfg.gsae_dim = 8;
    cfg.epochs = {5, 5, 15};
    cfg.folds = 4;
    cfg.repeats = 2;
    cfg.labels_per_class = 2;
    const RunResult r1 = run_experiment(cfg, ds);
    cfg.out_dir = (tmp / "b").string();
    const RunResult r2 = run_experiment(cfg, ds);
    if (read_file(r1.results_csv_path) != read_file(r2.results_csv_path)) {
      ok = false;
      why = "results.csv differs across identical runs";
    }
    fs::remove_all(tmp);
  }

  c.seconds = t.seconds();
  c.pass = ok && c.seconds < c.budget_seconds;
  c.detail = ok ? "bitwise degeneration and reproducible results.csv" : why;
  return c;
}

// ---------------------------------------------------------------------------
// 8. Optional: IMDB-Binary at 10 labels per class (needs local data).
Criterion criterion_imdb() {
  Criterion c{8, "imdb-binary 10 labels/class (optional)"};
  c.gating = false;
  c.budget_seconds = 3600.0;
  const char* env = std::getenv("GDM_DATA_DIR");
  const std::string root = env ? env : "data";
  if (!fs::exists(fs::path(root) / "IMDB-BINARY" / "IMDB-BINARY_A.txt")) {
    c.skipped = true;
    c.detail = "dataset not present (set GDM_DATA_DIR to a TU data root to enable)";
    return c;
  }
  Timer t;
  const GraphDataset ds = load_tu_dataset(root, "IMDB-BINARY");
  ExperimentConfig cfg;
  cfg.dataset_root = root;
  cfg.dataset_name = "IMDB-BINARY";
  cfg.labels_per_class = 10;
  cfg.folds = 10;
  cfg.repeats = 1;
  const fs::path tmp = fs::temp_directory_path() / ("gdm_imdb_" + std::to_string(::getpid()));
  cfg.out_dir = (tmp / "gdm").string();
  const RunResult gdm = run_experiment(cfg, ds);
  cfg.augment = false;
  cfg.out_dir = (tmp / "base").string();
  const RunResult base = run_experiment(cfg, ds);
  fs::remove_all(tmp);
  c.seconds = t.seconds();
  c.pass = gdm.mean_accuracy > base.mean_accuracy;
  c.detail = fmt("gdm-acc %.3f vs baseline %.3f", gdm.mean_accuracy, base.mean_accuracy);
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(criterion_gradients());
  report(results.back());
  results.push_back(criterion_mixup_endpoints());
  report(results.back());
  results.push_back(criterion_decode_contracts());
  report(results.back());
  results.push_back(criterion_sampling_oracle());
  report(results.back());
  results.push_back(criterion_gsae_signal());
  report(results.back());
  results.push_back(criterion_low_label_benefit());
  report(results.back());
  results.push_back(criterion_determinism());
  report(results.back());
  results.push_back(criterion_imdb());
  report(results.back());

  int failed = 0;
  for (const Criterion& c : results)
    if (c.gating && !c.skipped && !c.pass) ++failed;
  std::printf("%d gating criterion(s) failed\n", failed);
  return failed == 0 ? 0 : 1;
}
