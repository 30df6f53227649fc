#include "qcov/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "qcov/error.hpp"

namespace qcov {

std::string to_string(MutationOp op) {
  switch (op) {
    case MutationOp::Noise: return "noise";
    case MutationOp::Brightness: return "brightness";
    case MutationOp::Contrast: return "contrast";
    case MutationOp::Translate: return "translate";
  }
  return "?";
}

void MutationConfig::validate() const {
  if (!(noise >= 0.0)) throw ConfigError("mutation noise must be >= 0");
  if (!(brightness >= 0.0)) throw ConfigError("mutation brightness must be >= 0");
  if (!(contrast_low > 0.0 && contrast_low <= contrast_high)) {
    throw ConfigError("mutation contrast range must satisfy 0 < low <= high");
  }
}

void FuzzConfig::validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (!(reenqueue_probability >= 0.0 && reenqueue_probability <= 1.0)) {
    throw ConfigError("reenqueue_probability must lie in [0, 1]");
  }
  coverage.validate();
  mutation.validate();
}

std::pair<std::size_t, std::size_t> feature_grid(std::size_t d) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
  if (side * side == d) return {side, side};
  return {1, d};
}

std::vector<double> mutate_noise(std::span<const double> x, double amplitude,
                                 std::mt19937_64& rng) {
  std::vector<double> out(x.begin(), x.end());
  if (amplitude == 0.0) return out;
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  for (double& v : out) v += u(rng);
  return out;
}

std::vector<double> mutate_brightness(std::span<const double> x, double delta) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v += delta;
  return out;
}

std::vector<double> mutate_contrast(std::span<const double> x, double factor) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = 0.5 + factor * (v - 0.5);
  return out;
}

std::vector<double> mutate_translate(std::span<const double> x, int drow, int dcol) {
  const auto [rows, cols] = feature_grid(x.size());
  std::vector<double> out(x.size(), 0.0);
  const auto r_n = static_cast<long>(rows);
  const auto c_n = static_cast<long>(cols);
  for (long r = 0; r < r_n; ++r) {
    for (long c = 0; c < c_n; ++c) {
      const long sr = r - drow;
      const long sc = c - dcol;
      if (sr < 0 || sr >= r_n || sc < 0 || sc >= c_n) continue;
      out[static_cast<std::size_t>(r * c_n + c)] = x[static_cast<std::size_t>(sr * c_n + sc)];
    }
  }
  return out;
}

FuzzSeed mutate(const FuzzSeed& seed, std::mt19937_64& rng, double alpha,
                const MutationConfig& mutation, MutationOp* applied) {
  std::uniform_int_distribution<int> pick(0, kNumMutationOps - 1);
  const auto op = static_cast<MutationOp>(pick(rng));
  std::vector<double> out;
  switch (op) {
    case MutationOp::Noise:
      out = mutate_noise(seed.features, mutation.noise, rng);
      break;
    case MutationOp::Brightness: {
      std::uniform_real_distribution<double> u(-mutation.brightness, mutation.brightness);
      out = mutate_brightness(seed.features, mutation.brightness == 0.0 ? 0.0 : u(rng));
      break;
    }
    case MutationOp::Contrast: {
      std::uniform_real_distribution<double> u(mutation.contrast_low, mutation.contrast_high);
      out = mutate_contrast(seed.features, u(rng));
      break;
    }
    case MutationOp::Translate: {
      // Row moves need a second grid row.
      const int directions = feature_grid(seed.features.size()).first > 1 ? 4 : 2;
      std::uniform_int_distribution<int> dir(0, directions - 1);
      static constexpr int kShift[4][2] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}};
      const int k = dir(rng);
      out = mutate_translate(seed.features, kShift[k][0], kShift[k][1]);
      break;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double lo = std::max(0.0, seed.reference[i] - alpha);
    const double hi = std::min(1.0, seed.reference[i] + alpha);
    out[i] = std::clamp(out[i], lo, hi);
  }
  if (applied != nullptr) *applied = op;
  FuzzSeed m;
  m.features = std::move(out);
  m.label = seed.label;
  m.reference = seed.reference;
  m.ancestor = seed.ancestor;
  m.mutation_depth = seed.mutation_depth + 1;
  return m;
}

LabeledDataset filter_correct(const QnnModel& model, const LabeledDataset& data) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(model, data.row(i)) == data.label(i)) keep.push_back(i);
  }
  return data.subset(keep);
}

namespace {

enum class Guidance { Coverage, Random };

FuzzOutcome run_loop(const QnnModel& model, const LabeledDataset& initial_seeds,
                     const StateProfile* profile, const FuzzConfig& config,
                     Guidance guidance) {
  config.validate();
  if (initial_seeds.empty()) throw ConfigError("fuzzing needs at least one initial seed");

  FuzzOutcome out;
  out.initial_seeds = filter_correct(model, initial_seeds);
  const auto& seeds = out.initial_seeds;
  out.failed_cases = LabeledDataset(seeds.num_features());
  out.retained = LabeledDataset(seeds.num_features());

  if (profile != nullptr) {
    out.tracker.emplace(*profile, config.coverage);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      out.tracker->add_input(forward(model, seeds.row(i)).probs);
    }
    out.coverage_before = out.tracker->report();
  }

  std::deque<FuzzSeed> queue;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto row = seeds.row(i);
    queue.push_back({{row.begin(), row.end()}, seeds.label(i), {row.begin(), row.end()}, i, 0});
  }

  std::mt19937_64 rng(config.seed);
  std::bernoulli_distribution keep(config.reenqueue_probability);
  std::vector<bool> ancestor_failed(seeds.size(), false);

  while (!queue.empty() && out.iterations < config.max_iterations) {
    FuzzSeed parent = std::move(queue.front());
    queue.pop_front();
    ++out.iterations;

    FuzzSeed child = mutate(parent, rng, config.alpha, config.mutation);
    const auto result = forward(model, child.features);
    if (argmax_class(result.scores) != child.label) {
      out.failed_cases.add(child.features, child.label);
      out.failed_ancestors.push_back(child.ancestor);
      ancestor_failed[child.ancestor] = true;
      if (out.tracker) out.tracker->add_input(result.probs);
      continue;
    }

    bool retain = false;
    if (guidance == Guidance::Coverage) {
      retain = out.tracker->probe(result.probs).increased(config.criterion);
    } else {
      retain = keep(rng);
    }
    if (!retain) continue;
    if (out.tracker) out.tracker->add_input(result.probs);
    out.retained.add(child.features, child.label);
    queue.push_back(std::move(child));
  }

  if (!seeds.empty()) {
    const auto hits = static_cast<double>(
        std::count(ancestor_failed.begin(), ancestor_failed.end(), true));
    out.tsr = 100.0 * hits / static_cast<double>(seeds.size());
  }
  if (out.tracker) out.coverage_after = out.tracker->report();
  return out;
}

}  // namespace

FuzzOutcome fuzz(const QnnModel& model, const LabeledDataset& initial_seeds,
                 const StateProfile& profile, const FuzzConfig& config) {
  return run_loop(model, initial_seeds, &profile, config, Guidance::Coverage);
}

FuzzOutcome random_test(const QnnModel& model, const LabeledDataset& initial_seeds,
                        const FuzzConfig& config, const StateProfile* profile) {
  return run_loop(model, initial_seeds, profile, config, Guidance::Random);
}

}  // namespace qcov
