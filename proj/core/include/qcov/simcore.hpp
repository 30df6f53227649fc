#pragma once

// Exact statevector simulation of small parameterized circuits.
//
// Basis ordering is big-endian: in basis index i, qubit 0 is the most
// significant bit, so for two qubits the amplitudes are ordered
// |00>, |01>, |10>, |11> with the left label belonging to qubit 0.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qcov {

using Amplitude = std::complex<double>;

class Statevector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit Statevector(int num_qubits);
  /// Takes ownership of raw amplitudes; length must be a power of two and the
  /// vector must be normalized within 1e-10.
  Statevector(int num_qubits, std::vector<Amplitude> amplitudes);

  static Statevector basis(int num_qubits, std::size_t index);

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  std::span<Amplitude> mutable_amplitudes() noexcept { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;

 private:
  int num_qubits_;
  std::vector<Amplitude> amps_;
};

enum class GateKind { RX, RY, RZ, H, X, CNOT, CZ, CRX, CRY, CRZ };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

bool is_rotation(GateKind kind);
bool is_controlled(GateKind kind);

/// One gate of a circuit program. Every gate acts on a single target; the
/// two-qubit kinds additionally carry a control.
struct GateOp {
  GateKind kind = GateKind::H;
  int target = 0;
  std::optional<int> control;
  std::optional<std::size_t> param_slot;

  static GateOp rx(int target, std::size_t slot) { return {GateKind::RX, target, std::nullopt, slot}; }
  static GateOp ry(int target, std::size_t slot) { return {GateKind::RY, target, std::nullopt, slot}; }
  static GateOp rz(int target, std::size_t slot) { return {GateKind::RZ, target, std::nullopt, slot}; }
  static GateOp h(int target) { return {GateKind::H, target, std::nullopt, std::nullopt}; }
  static GateOp x(int target) { return {GateKind::X, target, std::nullopt, std::nullopt}; }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, target, control, std::nullopt}; }
  static GateOp cz(int control, int target) { return {GateKind::CZ, target, control, std::nullopt}; }
  static GateOp crx(int control, int target, std::size_t slot) { return {GateKind::CRX, target, control, slot}; }
  static GateOp cry(int control, int target, std::size_t slot) { return {GateKind::CRY, target, control, slot}; }
  static GateOp crz(int control, int target, std::size_t slot) { return {GateKind::CRZ, target, control, slot}; }

  bool operator==(const GateOp&) const = default;
};

struct CircuitSpec {
  int num_qubits = 1;
  std::vector<GateOp> gates;
  std::size_t num_params = 0;

  /// Throws DimensionError naming the first offending gate.
  void validate() const;

  bool operator==(const CircuitSpec&) const = default;
};

/// 2x2 unitary acting on the target subspace, row-major.
using Matrix2 = std::array<Amplitude, 4>;

/// The single-qubit block applied to the target (for controlled kinds, the
/// block applied when the control is |1>).
Matrix2 gate_block(GateKind kind, double angle);

/// Applies `circuit` to a copy of `state`. Pure: the input is not modified.
Statevector apply_circuit(const Statevector& state, const CircuitSpec& circuit,
                          std::span<const double> params);

/// Applies the inverse circuit U^dagger (gates reversed, angles negated).
Statevector apply_circuit_adjoint(const Statevector& state,
                                  const CircuitSpec& circuit,
                                  std::span<const double> params);

/// In-place application of a single gate; no validation.
void apply_gate(std::span<Amplitude> amps, int num_qubits, const GateOp& gate,
                double angle);

/// Bit position of `qubit` inside a basis index (big-endian convention).
inline std::size_t qubit_shift(int num_qubits, int qubit) {
  return static_cast<std::size_t>(num_qubits - 1 - qubit);
}

struct ProbVector {
  std::vector<double> probs;
  std::optional<std::uint64_t> shots;  // nullopt when exact

  bool exact() const noexcept { return !shots.has_value(); }
  std::size_t size() const noexcept { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
};

ProbVector exact_probabilities(const Statevector& state);

/// Multinomial sample of `shots` measurements, returned as counts / shots.
/// Throws ConfigError when shots == 0.
ProbVector sample_probabilities(const Statevector& state, std::uint64_t shots,
                                std::uint64_t rng_seed);

/// Same as above but starting from an exact distribution.
ProbVector sample_probabilities(std::span<const double> exact_probs,
                                std::uint64_t shots, std::uint64_t rng_seed);

/// <a|b>
Amplitude inner_product(const Statevector& a, const Statevector& b);

/// |<a|b>|^2, clamped to [0, 1].
double fidelity(const Statevector& a, const Statevector& b);

/// Normalized vector of i.i.d. standard complex Gaussians.
Statevector haar_random_state(int num_qubits, std::uint64_t rng_seed);

/// <Z> on `qubit`, computed from a probability vector's marginal.
double z_expectation(std::span<const double> probs, int num_qubits, int qubit);

/// <Z> on `qubit`, computed directly from amplitudes.
double z_expectation(const Statevector& state, int qubit);

}  // namespace qcov
