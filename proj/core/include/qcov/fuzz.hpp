#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcov/coverage.hpp"
#include "qcov/dataset.hpp"
#include "qcov/qnn.hpp"

namespace qcov {

struct FuzzSeed {
  std::vector<double> features;
  int label = 0;
  std::vector<double> reference;  // features of the original ancestor
  std::size_t ancestor = 0;       // index into the filtered initial seeds
  int mutation_depth = 0;
};

enum class MutationOp { Noise, Brightness, Contrast, Translate };
inline constexpr int kNumMutationOps = 4;

std::string to_string(MutationOp op);

struct MutationConfig {
  double noise = 0.05;            // per-feature U(-noise, noise)
  double brightness = 0.1;        // constant shift U(-b, b)
  double contrast_low = 0.8;      // factor about 0.5 in [low, high]
  double contrast_high = 1.2;

  void validate() const;
};

/// Rows and columns of the grid a flat feature vector is laid out on: a
/// square when d is a perfect square, otherwise a single row.
std::pair<std::size_t, std::size_t> feature_grid(std::size_t d);

std::vector<double> mutate_noise(std::span<const double> x, double amplitude,
                                 std::mt19937_64& rng);
std::vector<double> mutate_brightness(std::span<const double> x, double delta);
std::vector<double> mutate_contrast(std::span<const double> x, double factor);
/// Shifts the grid by (drow, dcol) cells, filling vacated cells with 0.
std::vector<double> mutate_translate(std::span<const double> x, int drow, int dcol);

/// Applies one uniformly chosen operator, clips to [0, 1] and to
/// reference +- alpha, and increments the depth.
FuzzSeed mutate(const FuzzSeed& seed, std::mt19937_64& rng, double alpha,
                const MutationConfig& mutation = {},
                MutationOp* applied = nullptr);

struct FuzzConfig {
  Criterion criterion = Criterion::KSC;
  std::size_t max_iterations = 2000;
  double alpha = 0.2;
  std::uint64_t seed = 0;
  CoverageConfig coverage;
  MutationConfig mutation;
  /// random_test only: chance that a non-failing mutant is re-enqueued.
  double reenqueue_probability = 1.0;

  void validate() const;
};

struct FuzzOutcome {
  LabeledDataset failed_cases;            // the set U
  std::vector<std::size_t> failed_ancestors;
  LabeledDataset retained;                // re-enqueued mutants
  LabeledDataset initial_seeds;           // after filtering misclassified rows
  double tsr = 0.0;                       // percent
  std::size_t iterations = 0;
  std::optional<CoverageReport> coverage_before;
  std::optional<CoverageReport> coverage_after;
  std::optional<CoverageTracker> tracker;
};

/// Correctly classified rows of `data`.
LabeledDataset filter_correct(const QnnModel& model, const LabeledDataset& data);

/// Coverage-guided fuzzing: FIFO queue, one mutant per pop. Misclassified
/// mutants go to U; others are re-enqueued when they cover a new unit of the
/// configured criterion. The tracker holds the initial seeds, U and retained
/// mutants. Throws ConfigError on an empty seed set.
FuzzOutcome fuzz(const QnnModel& model, const LabeledDataset& initial_seeds,
                 const StateProfile& profile, const FuzzConfig& config);

/// Same loop without coverage: non-failing mutants are re-enqueued with
/// `reenqueue_probability`. Coverage is tracked only when `profile` is set.
FuzzOutcome random_test(const QnnModel& model, const LabeledDataset& initial_seeds,
                        const FuzzConfig& config,
                        const StateProfile* profile = nullptr);

}  // namespace qcov
