#include "gdm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "gdm/rng.hpp"

namespace gdm {

DifficultyPolicy parse_policy(const std::string& text) {
  if (text == "acc") return DifficultyPolicy::Acc;
  if (text == "unc") return DifficultyPolicy::Unc;
  throw std::invalid_argument("unknown difficulty policy '" + text + "' (expected acc|unc)");
}

std::string to_string(DifficultyPolicy p) {
  return p == DifficultyPolicy::Acc ? "acc" : "unc";
}

double prediction_entropy(const Vector& probs) {
  double ent = 0.0;
  for (Index c = 0; c < probs.size(); ++c)
    if (probs(c) > 0.0) ent -= probs(c) * std::log(probs(c));
  return ent;
}

Difficulty accuracy_difficulty(const Vector& probs, const Vector& label) {
  return argmax_lowest(probs) == argmax_lowest(label) ? Difficulty::Low : Difficulty::High;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<DifficultyTag> assess_difficulty(const ClassifierModel& model,
                                             const GraphDataset& dataset,
                                             DifficultyPolicy policy) {
  std::vector<DifficultyTag> tags;
  tags.reserve(dataset.graphs.size());
  if (policy == DifficultyPolicy::Acc) {
    for (Index i = 0; i < dataset.size(); ++i) {
      const Graph& g = dataset.graphs[static_cast<std::size_t>(i)];
      const Prediction p = model.forward(g);
      const Difficulty level = accuracy_difficulty(p.probs, g.label);
      tags.push_back({i, level, policy, level == Difficulty::Low ? 1.0 : 0.0});
    }
  } else {
    std::vector<double> entropies;
    entropies.reserve(dataset.graphs.size());
    for (const Graph& g : dataset.graphs)
      entropies.push_back(prediction_entropy(model.forward(g).probs));
    const double med = median(entropies);
    for (Index i = 0; i < dataset.size(); ++i) {
      const double ent = entropies[static_cast<std::size_t>(i)];
      tags.push_back({i, ent <= med ? Difficulty::Low : Difficulty::High, policy, ent});
    }
  }
  return tags;
}

namespace {

// One pair from `from` x `to`, uniform with replacement; i == j only when
// the relevant class is a singleton.
std::pair<Index, Index> draw_pair(const std::vector<Index>& from, const std::vector<Index>& to,
                                  std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> di(0, from.size() - 1);
  const Index i = from[di(rng)];
  std::uniform_int_distribution<std::size_t> dj(0, to.size() - 1);
  Index j = to[dj(rng)];
  if (&from == &to && to.size() > 1) {
    while (j == i) j = to[dj(rng)];
  }
  return {i, j};
}

std::vector<GeneratedGraph> generate_subset(const GsaeModel& gsae, const GraphDataset& dataset,
                                            const std::vector<Index>& from,
                                            const std::vector<Index>& to, const MixupConfig& cfg,
                                            Index count, const std::string& subset,
                                            std::uint64_t subset_seed) {
  std::vector<GeneratedGraph> out;
  out.reserve(static_cast<std::size_t>(count));
  auto rng = make_rng(subset_seed);
  for (Index k = 0; k < count; ++k) {
    const auto [i, j] = draw_pair(from, to, rng);
    const double lambda = sample_lambda(cfg, rng);
    const std::uint64_t mix_seed_k = mix_seed(subset_seed, static_cast<std::uint64_t>(k) + 1);
    GeneratedGraph gen;
    gen.graph = dual_mixup(gsae, dataset.graphs[static_cast<std::size_t>(i)],
                           dataset.graphs[static_cast<std::size_t>(j)], lambda, cfg, mix_seed_k);
    gen.source_i = i;
    gen.source_j = j;
    gen.lambda = lambda;
    gen.subset = subset;
    gen.mix_seed = mix_seed_k;
    out.push_back(std::move(gen));
  }
  return out;
}

}  // namespace

std::vector<GeneratedGraph> generate_balanced(const GsaeModel& gsae, const GraphDataset& dataset,
                                              const std::vector<DifficultyTag>& tags,
                                              const MixupConfig& cfg, const GenerationPlan& plan) {
  if (dataset.graphs.empty()) throw std::invalid_argument("generate_balanced: empty dataset");
  std::vector<Index> low, high, all;
  for (const DifficultyTag& t : tags)
    (t.level == Difficulty::Low ? low : high).push_back(t.graph_index);
  all.reserve(dataset.graphs.size());
  for (Index i = 0; i < dataset.size(); ++i) all.push_back(i);

  const bool degenerate = low.empty() || high.empty();
  if (degenerate)
    std::cerr << "[warn] balanced sampling: " << (low.empty() ? "low" : "high")
              << " difficulty class is empty; affected subsets use random pairing\n";
  const std::vector<Index>& lo = low.empty() ? all : low;
  const std::vector<Index>& hi = high.empty() ? all : high;

  std::vector<GeneratedGraph> out;
  out.reserve(static_cast<std::size_t>(3 * plan.per_subset));
  const auto append = [&out](std::vector<GeneratedGraph> part) {
    for (auto& g : part) out.push_back(std::move(g));
  };
  if (plan.low)
    append(generate_subset(gsae, dataset, lo, lo, cfg, plan.per_subset, "low",
                           mix_seed(plan.seed, 1)));
  if (plan.med)
    append(generate_subset(gsae, dataset, lo, hi, cfg, plan.per_subset, "med",
                           mix_seed(plan.seed, 2)));
  if (plan.high)
    append(generate_subset(gsae, dataset, hi, hi, cfg, plan.per_subset, "high",
                           mix_seed(plan.seed, 3)));
  return out;
}

std::vector<GeneratedGraph> generate_balanced(const GsaeModel& gsae, const GraphDataset& dataset,
                                              const std::vector<DifficultyTag>& tags,
                                              const MixupConfig& cfg, Index per_subset,
                                              std::uint64_t seed) {
  GenerationPlan plan;
  plan.per_subset = per_subset;
  plan.seed = seed;
  return generate_balanced(gsae, dataset, tags, cfg, plan);
}

std::vector<GeneratedGraph> generate_random(const GsaeModel& gsae, const GraphDataset& dataset,
                                            const MixupConfig& cfg, Index count,
                                            std::uint64_t seed) {
  if (dataset.graphs.empty()) throw std::invalid_argument("generate_random: empty dataset");
  std::vector<GeneratedGraph> out;
  out.reserve(static_cast<std::size_t>(count));
  auto rng = make_rng(mix_seed(seed, 4));
  std::uniform_int_distribution<std::size_t> draw(0, dataset.graphs.size() - 1);
  for (Index k = 0; k < count; ++k) {
    const Index i = static_cast<Index>(draw(rng));
    const Index j = static_cast<Index>(draw(rng));
    const double lambda = sample_lambda(cfg, rng);
    const std::uint64_t mix_seed_k = mix_seed(seed, 4, static_cast<std::uint64_t>(k) + 1);
    GeneratedGraph gen;
    gen.graph = dual_mixup(gsae, dataset.graphs[static_cast<std::size_t>(i)],
                           dataset.graphs[static_cast<std::size_t>(j)], lambda, cfg, mix_seed_k);
    gen.source_i = i;
    gen.source_j = j;
    gen.lambda = lambda;
    gen.subset = "rand";
    gen.mix_seed = mix_seed_k;
    out.push_back(std::move(gen));
  }
  return out;
}

}  // namespace gdm
