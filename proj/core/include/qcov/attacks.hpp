#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcov/dataset.hpp"
#include "qcov/qnn.hpp"

namespace qcov {

enum class AttackKind { Random, FGSM, JSMA };

std::string to_string(AttackKind k);
AttackKind attack_kind_from_string(const std::string& s);

struct AttackConfig {
  AttackKind kind = AttackKind::FGSM;
  double epsilon = 64.0 / 255.0;  // L-infinity budget (Random, FGSM)
  double theta = 1.0;             // JSMA per-feature increment
  double gamma = 0.1;             // JSMA max fraction of features modified
  std::uint64_t seed = 0;

  void validate() const;
};

struct AttackResult {
  std::vector<double> features;
  bool success = false;          // prediction differs from the label
  std::size_t features_changed = 0;
};

/// clip(x + U(-eps, eps)^d, 0, 1).
std::vector<double> random_perturb(std::span<const double> x, double epsilon,
                                   std::uint64_t seed);

AttackResult random_attack(const QnnModel& model, std::span<const double> x,
                           int label, double epsilon, std::uint64_t seed);

/// clip(x + eps * sign(d loss / d x), 0, 1) on the training loss.
AttackResult fgsm(const QnnModel& model, std::span<const double> x, int label,
                  double epsilon);

/// Single-feature JSMA: repeatedly raises (by theta, clipped to 1) the
/// untouched feature whose gradient most favours the runner-up class over the
/// true class, until the prediction flips or ceil(gamma * d) features have
/// been touched. Stops early when no feature has positive saliency.
AttackResult jsma(const QnnModel& model, std::span<const double> x, int label,
                  double theta, double gamma);

AttackResult run_attack(const QnnModel& model, std::span<const double> x,
                        int label, const AttackConfig& config,
                        std::uint64_t row_index = 0);

struct AttackSuite {
  LabeledDataset adversarial;  // same labels as the source rows
  std::vector<bool> success;
  double success_rate = 0.0;   // over all rows, in [0, 1]
};

/// Attacks every row. Random attacks use seed `config.seed + row`.
AttackSuite attack_dataset(const QnnModel& model, const LabeledDataset& data,
                           const AttackConfig& config, unsigned threads = 1);

}  // namespace qcov
