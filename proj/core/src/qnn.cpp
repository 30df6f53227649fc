#include "qcov/qnn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "qcov/error.hpp"
#include "qcov/gradients.hpp"
#include "qcov/parallel.hpp"

namespace qcov {

std::string to_string(EncoderKind k) {
  return k == EncoderKind::Amplitude ? "amplitude" : "angle";
}
std::string to_string(AnsatzPreset p) {
  return p == AnsatzPreset::LayeredRot ? "layered_rot" : "strongly_entangling";
}
std::string to_string(Entanglement e) {
  switch (e) {
    case Entanglement::Linear: return "linear";
    case Entanglement::Cyclic: return "cyclic";
    case Entanglement::Star: return "star";
    case Entanglement::Full: return "full";
  }
  return "?";
}

EncoderKind encoder_kind_from_string(const std::string& s) {
  if (s == "amplitude") return EncoderKind::Amplitude;
  if (s == "angle") return EncoderKind::Angle;
  throw ConfigError("unknown encoder '" + s + "' (expected amplitude|angle)");
}
AnsatzPreset ansatz_preset_from_string(const std::string& s) {
  if (s == "layered_rot") return AnsatzPreset::LayeredRot;
  if (s == "strongly_entangling") return AnsatzPreset::StronglyEntangling;
  throw ConfigError("unknown ansatz '" + s +
                    "' (expected layered_rot|strongly_entangling)");
}
Entanglement entanglement_from_string(const std::string& s) {
  if (s == "linear") return Entanglement::Linear;
  if (s == "cyclic") return Entanglement::Cyclic;
  if (s == "star") return Entanglement::Star;
  if (s == "full") return Entanglement::Full;
  throw ConfigError("unknown entanglement '" + s +
                    "' (expected linear|cyclic|star|full)");
}

void EncoderSpec::validate(int num_qubits) const {
  if (input_dim == 0) throw ConfigError("encoder input_dim must be >= 1");
  if (kind == EncoderKind::Amplitude) {
    if (input_dim > (std::size_t{1} << num_qubits)) {
      throw ConfigError("amplitude encoding of " + std::to_string(input_dim) +
                        " features needs more than " +
                        std::to_string(num_qubits) + " qubits");
    }
  } else if (input_dim > static_cast<std::size_t>(num_qubits)) {
    throw ConfigError("angle encoding needs one qubit per feature (" +
                      std::to_string(input_dim) + " features, " +
                      std::to_string(num_qubits) + " qubits)");
  }
}

std::vector<std::pair<int, int>> entangling_pairs(Entanglement e,
                                                  int num_qubits, int layer,
                                                  AnsatzPreset preset) {
  std::vector<std::pair<int, int>> pairs;
  const int q = num_qubits;
  const bool flip = preset == AnsatzPreset::StronglyEntangling && layer % 2 == 1;
  auto push = [&](int a, int b) {
    if (flip) pairs.emplace_back(b, a);
    else pairs.emplace_back(a, b);
  };
  switch (e) {
    case Entanglement::Linear:
      for (int i = 0; i + 1 < q; ++i) push(i, i + 1);
      break;
    case Entanglement::Cyclic:
      if (q >= 2) {
        int range = 1;
        if (preset == AnsatzPreset::StronglyEntangling) range = 1 + layer % (q - 1);
        for (int i = 0; i < q; ++i) pairs.emplace_back(i, (i + range) % q);
      }
      break;
    case Entanglement::Star:
      for (int i = 1; i < q; ++i) push(0, i);
      break;
    case Entanglement::Full:
      for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j) push(i, j);
      break;
  }
  return pairs;
}

CircuitSpec expand_ansatz(const AnsatzSpec& ansatz, int num_qubits) {
  if (ansatz.num_layers < 1) throw ConfigError("ansatz needs at least one layer");
  CircuitSpec c;
  c.num_qubits = num_qubits;
  std::size_t slot = 0;
  for (int layer = 0; layer < ansatz.num_layers; ++layer) {
    for (int qb = 0; qb < num_qubits; ++qb) {
      if (ansatz.preset == AnsatzPreset::LayeredRot) {
        c.gates.push_back(GateOp::rx(qb, slot++));
        c.gates.push_back(GateOp::rz(qb, slot++));
        c.gates.push_back(GateOp::rx(qb, slot++));
      } else {
        c.gates.push_back(GateOp::rz(qb, slot++));
        c.gates.push_back(GateOp::ry(qb, slot++));
        c.gates.push_back(GateOp::rz(qb, slot++));
      }
    }
    for (auto [ctrl, tgt] :
         entangling_pairs(ansatz.entanglement, num_qubits, layer, ansatz.preset)) {
      c.gates.push_back(GateOp::cnot(ctrl, tgt));
    }
  }
  c.num_params = slot;
  return c;
}

CircuitSpec angle_encoding_circuit(int num_qubits) {
  CircuitSpec c;
  c.num_qubits = num_qubits;
  for (int qb = 0; qb < num_qubits; ++qb) {
    c.gates.push_back(GateOp::ry(qb, static_cast<std::size_t>(qb)));
  }
  c.num_params = static_cast<std::size_t>(num_qubits);
  return c;
}

Statevector encode(const EncoderSpec& encoder, std::span<const double> x,
                   int num_qubits) {
  encoder.validate(num_qubits);
  if (x.size() != encoder.input_dim) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " features, encoder expects " +
                         std::to_string(encoder.input_dim));
  }
  if (encoder.kind == EncoderKind::Amplitude) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    if (!(sq > 0.0) || !std::isfinite(sq)) {
      throw EncodingError("amplitude encoding of a zero-norm input");
    }
    const double inv = 1.0 / std::sqrt(sq);
    std::vector<Amplitude> amps(std::size_t{1} << num_qubits, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) amps[i] = x[i] * inv;
    return Statevector(num_qubits, std::move(amps));
  }
  const CircuitSpec enc = angle_encoding_circuit(num_qubits);
  std::vector<double> angles(static_cast<std::size_t>(num_qubits));
  for (int qb = 0; qb < num_qubits; ++qb) {
    angles[static_cast<std::size_t>(qb)] =
        std::numbers::pi * x[static_cast<std::size_t>(qb) % x.size()];
  }
  return apply_circuit(Statevector(num_qubits), enc, angles);
}

void QnnModel::validate() const {
  encoder.validate(num_qubits);
  if (num_classes < 2 || num_classes > 3) {
    throw ConfigError("num_classes must be 2 or 3");
  }
  if (readout_qubits.size() != static_cast<std::size_t>(num_classes)) {
    throw ConfigError("need one readout qubit per class");
  }
  std::set<int> seen;
  for (int r : readout_qubits) {
    if (r < 0 || r >= num_qubits) throw ConfigError("readout qubit out of range");
    if (!seen.insert(r).second) throw ConfigError("readout qubits must be distinct");
  }
  if (circuit.num_qubits != num_qubits) {
    throw DimensionError("circuit qubit count differs from model");
  }
  if (params.size() != circuit.num_params) {
    throw DimensionError("model has " + std::to_string(params.size()) +
                         " parameters, circuit expects " +
                         std::to_string(circuit.num_params));
  }
  circuit.validate();
}

QnnModel make_model(const EncoderSpec& encoder, const AnsatzSpec& ansatz,
                    int num_qubits, int num_classes, std::uint64_t init_seed,
                    double init_scale) {
  QnnModel m;
  m.encoder = encoder;
  m.ansatz = ansatz;
  m.num_qubits = num_qubits;
  m.circuit = expand_ansatz(ansatz, num_qubits);
  m.num_classes = num_classes;
  for (int c = 0; c < num_classes; ++c) m.readout_qubits.push_back(c);
  std::mt19937_64 rng(init_seed);
  std::uniform_real_distribution<double> u(-init_scale, init_scale);
  m.params.resize(m.circuit.num_params);
  for (double& p : m.params) p = u(rng);
  m.validate();
  return m;
}

Statevector output_state(const QnnModel& model, std::span<const double> x) {
  return apply_circuit(encode(model.encoder, x, model.num_qubits),
                       model.circuit, model.params);
}

std::vector<double> class_scores(const QnnModel& model,
                                 std::span<const double> probs) {
  std::vector<double> scores(static_cast<std::size_t>(model.num_classes));
  for (int c = 0; c < model.num_classes; ++c) {
    scores[static_cast<std::size_t>(c)] = z_expectation(
        probs, model.num_qubits, model.readout_qubits[static_cast<std::size_t>(c)]);
  }
  return scores;
}

ForwardResult forward(const QnnModel& model, std::span<const double> x,
                      std::optional<std::uint64_t> shots, std::uint64_t seed) {
  const Statevector out = output_state(model, x);
  ForwardResult r;
  r.probs = shots ? sample_probabilities(out, *shots, seed)
                  : exact_probabilities(out);
  r.scores = class_scores(model, r.probs.probs);
  return r;
}

int argmax_class(std::span<const double> scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

int predict(const QnnModel& model, std::span<const double> x) {
  return argmax_class(forward(model, x).scores);
}

namespace {

std::vector<double> softmax(std::span<const double> scores, double temperature) {
  std::vector<double> p(scores.size());
  double mx = -INFINITY;
  for (double s : scores) mx = std::max(mx, s * temperature);
  double total = 0.0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    p[c] = std::exp(scores[c] * temperature - mx);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace

double cross_entropy(std::span<const double> scores, int label,
                     const LossSpec& loss) {
  double mx = -INFINITY;
  for (double s : scores) mx = std::max(mx, s * loss.temperature);
  double total = 0.0;
  for (double s : scores) total += std::exp(s * loss.temperature - mx);
  return mx + std::log(total) -
         scores[static_cast<std::size_t>(label)] * loss.temperature;
}

std::vector<double> cross_entropy_score_grad(std::span<const double> scores,
                                             int label, const LossSpec& loss) {
  std::vector<double> g = softmax(scores, loss.temperature);
  g[static_cast<std::size_t>(label)] -= 1.0;
  for (double& v : g) v *= loss.temperature;
  return g;
}

double dataset_loss(const QnnModel& model, const LabeledDataset& data,
                    const LossSpec& loss) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += cross_entropy(forward(model, data.row(i)).scores, data.label(i), loss);
  }
  return total / static_cast<double>(data.size());
}

double accuracy(const QnnModel& model, const LabeledDataset& data) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(model, data.row(i)) == data.label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainResult train(const QnnModel& model, const LabeledDataset& data,
                  const TrainConfig& config) {
  model.validate();
  if (data.empty()) throw ConfigError("training set is empty");
  if (data.num_classes() > model.num_classes) {
    throw ConfigError("dataset has labels beyond the model's class count");
  }
  const auto counts = data.class_counts();
  if (std::count_if(counts.begin(), counts.end(),
                    [](std::size_t n) { return n > 0; }) < 2) {
    throw ConfigError("training needs at least two classes present");
  }
  if (config.epochs < 0 || config.batch_size == 0) {
    throw ConfigError("epochs must be >= 0 and batch_size >= 1");
  }

  TrainResult result;
  result.model = model;
  result.model.training_digest = data.digest();
  QnnModel& m = result.model;
  const std::size_t np = m.params.size();

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> adam_m(np, 0.0), adam_v(np, 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  long step = 0;

  result.initial_loss = dataset_loss(m, data, config.loss);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::size_t bs = end - start;
      std::vector<std::vector<double>> per_sample(bs);
      parallel_for(bs, config.threads, [&](std::size_t k) {
        const std::size_t i = order[start + k];
        per_sample[k] = loss_param_grad(m, data.row(i), data.label(i), config.loss);
      });
      std::vector<double> grad(np, 0.0);
      for (const auto& g : per_sample)
        for (std::size_t j = 0; j < np; ++j) grad[j] += g[j];
      for (double& g : grad) g /= static_cast<double>(bs);

      ++step;
      if (config.optimizer == Optimizer::SGD) {
        for (std::size_t j = 0; j < np; ++j) m.params[j] -= config.learning_rate * grad[j];
      } else {
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
        for (std::size_t j = 0; j < np; ++j) {
          adam_m[j] = kBeta1 * adam_m[j] + (1.0 - kBeta1) * grad[j];
          adam_v[j] = kBeta2 * adam_v[j] + (1.0 - kBeta2) * grad[j] * grad[j];
          const double mhat = adam_m[j] / c1;
          const double vhat = adam_v[j] / c2;
          m.params[j] -= config.learning_rate * mhat / (std::sqrt(vhat) + kEps);
        }
      }
    }
    const double loss = dataset_loss(m, data, config.loss);
    if (!std::isfinite(loss)) {
      throw TrainingError("training diverged at epoch " + std::to_string(epoch),
                          epoch);
    }
    result.loss_history.push_back(loss);
  }
  result.train_accuracy = accuracy(m, data);
  return result;
}

}  // namespace qcov
