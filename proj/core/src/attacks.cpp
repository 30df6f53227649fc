#include "qcov/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcov/error.hpp"
#include "qcov/gradients.hpp"
#include "qcov/parallel.hpp"

namespace qcov {

std::string to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Random: return "random";
    case AttackKind::FGSM: return "fgsm";
    case AttackKind::JSMA: return "jsma";
  }
  return "?";
}

AttackKind attack_kind_from_string(const std::string& s) {
  if (s == "random") return AttackKind::Random;
  if (s == "fgsm") return AttackKind::FGSM;
  if (s == "jsma") return AttackKind::JSMA;
  throw ConfigError("unknown attack '" + s + "' (expected random|fgsm|jsma)");
}

void AttackConfig::validate() const {
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (!(theta > 0.0)) throw ConfigError("theta must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
}

namespace {

std::size_t count_changed(std::span<const double> a, std::span<const double> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

AttackResult finish(const QnnModel& model, std::span<const double> x,
                    std::vector<double> adv, int label) {
  AttackResult r;
  r.success = predict(model, adv) != label;
  r.features_changed = count_changed(x, adv);
  r.features = std::move(adv);
  return r;
}

}  // namespace

std::vector<double> random_perturb(std::span<const double> x, double epsilon,
                                   std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  std::vector<double> out(x.begin(), x.end());
  if (epsilon == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-epsilon, epsilon);
  for (double& v : out) v = std::clamp(v + u(rng), 0.0, 1.0);
  return out;
}

AttackResult random_attack(const QnnModel& model, std::span<const double> x,
                           int label, double epsilon, std::uint64_t seed) {
  return finish(model, x, random_perturb(x, epsilon, seed), label);
}

AttackResult fgsm(const QnnModel& model, std::span<const double> x, int label,
                  double epsilon) {
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  std::vector<double> adv(x.begin(), x.end());
  if (epsilon > 0.0) {
    const auto g = input_grad(model, x, label);
    for (std::size_t i = 0; i < adv.size(); ++i) {
      const double sign = g[i] > 0.0 ? 1.0 : (g[i] < 0.0 ? -1.0 : 0.0);
      adv[i] = std::clamp(adv[i] + epsilon * sign, 0.0, 1.0);
    }
  }
  return finish(model, x, std::move(adv), label);
}

AttackResult jsma(const QnnModel& model, std::span<const double> x, int label,
                  double theta, double gamma) {
  if (!(theta > 0.0)) throw ConfigError("theta must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  std::vector<double> adv(x.begin(), x.end());
  const auto budget =
      static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(x.size())));
  std::vector<bool> touched(x.size(), false);

  for (std::size_t used = 0; used < budget; ++used) {
    const auto scores = forward(model, adv).scores;
    if (argmax_class(scores) != label) break;
    int target = -1;
    for (int c = 0; c < model.num_classes; ++c) {
      if (c == label) continue;
      if (target < 0 || scores[static_cast<std::size_t>(c)] >
                            scores[static_cast<std::size_t>(target)]) {
        target = c;
      }
    }
    const auto jac = input_score_jacobian(model, adv);
    const auto& toward = jac[static_cast<std::size_t>(target)];
    const auto& away = jac[static_cast<std::size_t>(label)];
    std::size_t best = adv.size();
    double best_saliency = 0.0;
    for (std::size_t i = 0; i < adv.size(); ++i) {
      if (touched[i] || adv[i] >= 1.0) continue;
      const double saliency = toward[i] - away[i];
      if (saliency > best_saliency) {
        best_saliency = saliency;
        best = i;
      }
    }
    if (best == adv.size()) break;
    touched[best] = true;
    adv[best] = std::min(1.0, adv[best] + theta);
  }
  return finish(model, x, std::move(adv), label);
}

AttackResult run_attack(const QnnModel& model, std::span<const double> x,
                        int label, const AttackConfig& config,
                        std::uint64_t row_index) {
  config.validate();
  switch (config.kind) {
    case AttackKind::Random:
      return random_attack(model, x, label, config.epsilon, config.seed + row_index);
    case AttackKind::FGSM:
      return fgsm(model, x, label, config.epsilon);
    case AttackKind::JSMA:
      return jsma(model, x, label, config.theta, config.gamma);
  }
  throw ConfigError("unknown attack kind");
}

AttackSuite attack_dataset(const QnnModel& model, const LabeledDataset& data,
                           const AttackConfig& config, unsigned threads) {
  config.validate();
  std::vector<AttackResult> results(data.size());
  parallel_for(data.size(), threads, [&](std::size_t i) {
    results[i] = run_attack(model, data.row(i), data.label(i), config, i);
  });
  AttackSuite out;
  out.adversarial = LabeledDataset(data.num_features());
  out.adversarial.class_names = data.class_names;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.adversarial.add(results[i].features, data.label(i));
    out.success.push_back(results[i].success);
    hits += results[i].success;
  }
  out.success_rate =
      data.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(data.size());
  return out;
}

}  // namespace qcov
