#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcov/dataset.hpp"
#include "qcov/simcore.hpp"

namespace qcov {

enum class EncoderKind { Amplitude, Angle };

/// Amplitude: features are zero-padded to 2^q and L2-normalized.
/// Angle: feature i drives RY(pi * x_i) on qubit i; with fewer features than
/// qubits, features are repeated cyclically over the remaining qubits.
struct EncoderSpec {
  EncoderKind kind = EncoderKind::Angle;
  std::size_t input_dim = 0;

  void validate(int num_qubits) const;
  bool operator==(const EncoderSpec&) const = default;
};

enum class AnsatzPreset { LayeredRot, StronglyEntangling };
enum class Entanglement { Linear, Cyclic, Star, Full };

struct AnsatzSpec {
  AnsatzPreset preset = AnsatzPreset::LayeredRot;
  int num_layers = 1;
  Entanglement entanglement = Entanglement::Linear;

  bool operator==(const AnsatzSpec&) const = default;
};

std::string to_string(EncoderKind k);
std::string to_string(AnsatzPreset p);
std::string to_string(Entanglement e);
EncoderKind encoder_kind_from_string(const std::string& s);
AnsatzPreset ansatz_preset_from_string(const std::string& s);
Entanglement entanglement_from_string(const std::string& s);

/// (control, target) pairs of one entangling block. Linear gives q-1 pairs,
/// Cyclic q, Star q-1 (hub is qubit 0) and Full q(q-1)/2.
std::vector<std::pair<int, int>> entangling_pairs(
    Entanglement e, int num_qubits, int layer,
    AnsatzPreset preset = AnsatzPreset::LayeredRot);

/// Expands the ansatz into a gate program with 3 * q * num_layers parameters.
/// LayeredRot: RX-RZ-RX on every qubit then CNOTs over the strategy's pairs.
/// StronglyEntangling: RZ-RY-RZ on every qubit then CNOTs whose pairs are
/// offset by the layer index (range grows with depth for Cyclic).
CircuitSpec expand_ansatz(const AnsatzSpec& ansatz, int num_qubits);

/// One RY per qubit; parameter i is the angle on qubit i.
CircuitSpec angle_encoding_circuit(int num_qubits);

Statevector encode(const EncoderSpec& encoder, std::span<const double> x,
                   int num_qubits);

struct QnnModel {
  EncoderSpec encoder;
  AnsatzSpec ansatz;
  int num_qubits = 1;
  CircuitSpec circuit;
  std::vector<double> params;
  std::vector<int> readout_qubits;  // class c is read from readout_qubits[c]
  int num_classes = 2;
  std::string training_digest;  // digest of the dataset it was trained on

  void validate() const;
  bool operator==(const QnnModel&) const = default;
};

/// Builds a model with class c read out on qubit c and parameters drawn
/// uniformly from [-init_scale, init_scale].
QnnModel make_model(const EncoderSpec& encoder, const AnsatzSpec& ansatz,
                    int num_qubits, int num_classes, std::uint64_t init_seed,
                    double init_scale = 3.141592653589793);

/// Output statevector U * encode(x).
Statevector output_state(const QnnModel& model, std::span<const double> x);

struct ForwardResult {
  ProbVector probs;
  std::vector<double> scores;  // <Z> of each class readout qubit
};

ForwardResult forward(const QnnModel& model, std::span<const double> x,
                      std::optional<std::uint64_t> shots = std::nullopt,
                      std::uint64_t seed = 0);

/// Class scores from the single-qubit Z marginals of `probs`.
std::vector<double> class_scores(const QnnModel& model,
                                 std::span<const double> probs);

/// argmax of the scores; ties resolve to the lower class index.
int argmax_class(std::span<const double> scores);
int predict(const QnnModel& model, std::span<const double> x);

/// Softmax cross-entropy over temperature-scaled scores.
struct LossSpec {
  double temperature = 1.0;
};

double cross_entropy(std::span<const double> scores, int label,
                     const LossSpec& loss = {});
/// d loss / d score_c.
std::vector<double> cross_entropy_score_grad(std::span<const double> scores,
                                             int label,
                                             const LossSpec& loss = {});

double dataset_loss(const QnnModel& model, const LabeledDataset& data,
                    const LossSpec& loss = {});
double accuracy(const QnnModel& model, const LabeledDataset& data);

enum class Optimizer { SGD, Adam };

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 0.05;
  std::size_t batch_size = 16;
  Optimizer optimizer = Optimizer::Adam;
  std::uint64_t seed = 0;
  LossSpec loss;
  unsigned threads = 1;
};

struct TrainResult {
  QnnModel model;
  std::vector<double> loss_history;  // full-dataset loss after each epoch
  double initial_loss = 0.0;
  double train_accuracy = 0.0;
};

/// Mini-batch training with parameter-shift gradients. Throws TrainingError
/// (carrying the epoch) if the loss becomes non-finite.
TrainResult train(const QnnModel& model, const LabeledDataset& data,
                  const TrainConfig& config);

inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const QnnModel& model);
QnnModel model_from_json(const std::string& text);
void save_model(const QnnModel& model, const std::filesystem::path& path);
QnnModel load_model(const std::filesystem::path& path);

}  // namespace qcov
