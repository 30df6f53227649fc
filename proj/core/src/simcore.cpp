#include "qcov/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qcov/error.hpp"

namespace qcov {

namespace {

constexpr int kMaxQubits = 24;

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw DimensionError("qubit count " + std::to_string(num_qubits) +
                         " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
}

double squared_norm(std::span<const Amplitude> amps) {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

}  // namespace

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
  check_qubit_count(num_qubits);
  amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector::Statevector(int num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(num_qubits);
  if (amps_.size() != (std::size_t{1} << num_qubits)) {
    throw DimensionError("statevector has " + std::to_string(amps_.size()) +
                         " amplitudes, expected 2^" +
                         std::to_string(num_qubits));
  }
  if (std::abs(std::sqrt(squared_norm(amps_)) - 1.0) > 1e-10) {
    throw DimensionError("statevector is not normalized");
  }
}

Statevector Statevector::basis(int num_qubits, std::size_t index) {
  Statevector s(num_qubits);
  if (index >= s.dim()) {
    throw DimensionError("basis index " + std::to_string(index) +
                         " out of range");
  }
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double Statevector::norm() const { return std::sqrt(squared_norm(amps_)); }

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H,
                     GateKind::X, GateKind::CNOT, GateKind::CZ, GateKind::CRX,
                     GateKind::CRY, GateKind::CRZ}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown gate kind '" + std::string(name) + "'");
}

bool is_rotation(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
      return true;
    default:
      return false;
  }
}

bool is_controlled(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
      return true;
    default:
      return false;
  }
}

void CircuitSpec::validate() const {
  check_qubit_count(num_qubits);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const GateOp& op = gates[g];
    auto fail = [&](const std::string& why) {
      throw DimensionError("gate " + std::to_string(g) + " (" +
                           std::string(to_string(op.kind)) + "): " + why);
    };
    if (op.target < 0 || op.target >= num_qubits) fail("target out of range");
    if (is_controlled(op.kind)) {
      if (!op.control) fail("missing control qubit");
      if (*op.control < 0 || *op.control >= num_qubits)
        fail("control out of range");
      if (*op.control == op.target) fail("control equals target");
    } else if (op.control) {
      fail("unexpected control qubit");
    }
    if (is_rotation(op.kind)) {
      if (!op.param_slot) fail("rotation without parameter slot");
      if (*op.param_slot >= num_params) fail("parameter slot out of range");
    } else if (op.param_slot) {
      fail("parameter slot on a fixed gate");
    }
  }
}

Matrix2 gate_block(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const Amplitude i{0.0, 1.0};
  switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
      return {c, -i * s, -i * s, c};
    case GateKind::RY:
    case GateKind::CRY:
      return {c, -s, s, c};
    case GateKind::RZ:
    case GateKind::CRZ:
      return {std::polar(1.0, -angle / 2.0), 0.0, 0.0,
              std::polar(1.0, angle / 2.0)};
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      return {r, r, r, -r};
    }
    case GateKind::X:
    case GateKind::CNOT:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::CZ:
      return {1.0, 0.0, 0.0, -1.0};
  }
  return {1.0, 0.0, 0.0, 1.0};
}

void apply_gate(std::span<Amplitude> amps, int num_qubits, const GateOp& gate,
                double angle) {
  const Matrix2 m = gate_block(gate.kind, angle);
  const std::size_t tbit = std::size_t{1} << qubit_shift(num_qubits, gate.target);
  const std::size_t cmask =
      gate.control ? std::size_t{1} << qubit_shift(num_qubits, *gate.control)
                   : 0;
  const std::size_t dim = amps.size();
  // Walk pairs (i, i | tbit) with the target bit clear.
  for (std::size_t base = 0; base < dim; base += 2 * tbit) {
    for (std::size_t off = 0; off < tbit; ++off) {
      const std::size_t i0 = base + off;
      if ((i0 & cmask) != cmask) continue;
      const std::size_t i1 = i0 | tbit;
      const Amplitude a0 = amps[i0];
      const Amplitude a1 = amps[i1];
      amps[i0] = m[0] * a0 + m[1] * a1;
      amps[i1] = m[2] * a0 + m[3] * a1;
    }
  }
}

namespace {

void check_params(const Statevector& state, const CircuitSpec& circuit,
                  std::span<const double> params) {
  if (state.num_qubits() != circuit.num_qubits) {
    throw DimensionError("state has " + std::to_string(state.num_qubits()) +
                         " qubits but circuit expects " +
                         std::to_string(circuit.num_qubits));
  }
  if (params.size() != circuit.num_params) {
    throw DimensionError("got " + std::to_string(params.size()) +
                         " parameters, circuit expects " +
                         std::to_string(circuit.num_params));
  }
  circuit.validate();
}

double gate_angle(const GateOp& g, std::span<const double> params) {
  return g.param_slot ? params[*g.param_slot] : 0.0;
}

}  // namespace

Statevector apply_circuit(const Statevector& state, const CircuitSpec& circuit,
                          std::span<const double> params) {
  check_params(state, circuit, params);
  Statevector out = state;
  for (const GateOp& g : circuit.gates) {
    apply_gate(out.mutable_amplitudes(), out.num_qubits(), g,
               gate_angle(g, params));
  }
  return out;
}

Statevector apply_circuit_adjoint(const Statevector& state,
                                  const CircuitSpec& circuit,
                                  std::span<const double> params) {
  check_params(state, circuit, params);
  Statevector out = state;
  // H, X, CNOT, CZ are self-inverse; rotations invert by negating the angle.
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    apply_gate(out.mutable_amplitudes(), out.num_qubits(), *it,
               -gate_angle(*it, params));
  }
  return out;
}

ProbVector exact_probabilities(const Statevector& state) {
  ProbVector pv;
  pv.probs.resize(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) pv.probs[i] = std::norm(state[i]);
  return pv;
}

ProbVector sample_probabilities(std::span<const double> exact_probs,
                                std::uint64_t shots, std::uint64_t rng_seed) {
  if (shots == 0) throw ConfigError("shots must be >= 1");
  std::mt19937_64 rng(rng_seed);
  ProbVector pv;
  pv.shots = shots;
  pv.probs.assign(exact_probs.size(), 0.0);
  // Multinomial via sequential conditional binomials.
  std::uint64_t remaining = shots;
  double mass_left = 1.0;
  for (std::size_t i = 0; i < exact_probs.size() && remaining > 0; ++i) {
    std::uint64_t count = 0;
    if (i + 1 == exact_probs.size()) {
      count = remaining;
    } else {
      const double p = mass_left > 0.0
                           ? std::clamp(exact_probs[i] / mass_left, 0.0, 1.0)
                           : 0.0;
      if (p >= 1.0) {
        count = remaining;
      } else if (p > 0.0) {
        std::binomial_distribution<std::uint64_t> draw(remaining, p);
        count = draw(rng);
      }
    }
    pv.probs[i] = static_cast<double>(count) / static_cast<double>(shots);
    remaining -= count;
    mass_left -= exact_probs[i];
  }
  return pv;
}

ProbVector sample_probabilities(const Statevector& state, std::uint64_t shots,
                                std::uint64_t rng_seed) {
  return sample_probabilities(exact_probabilities(state).probs, shots,
                              rng_seed);
}

Amplitude inner_product(const Statevector& a, const Statevector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("fidelity between states of different dimension");
  }
  Amplitude acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double fidelity(const Statevector& a, const Statevector& b) {
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

Statevector haar_random_state(int num_qubits, std::uint64_t rng_seed) {
  check_qubit_count(num_qubits);
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
  double sq = 0.0;
  for (auto& a : amps) {
    const double re = normal(rng);
    const double im = normal(rng);
    a = {re, im};
    sq += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(sq);
  for (auto& a : amps) a *= inv;
  return Statevector(num_qubits, std::move(amps));
}

double z_expectation(std::span<const double> probs, int num_qubits, int qubit) {
  const std::size_t bit = std::size_t{1} << qubit_shift(num_qubits, qubit);
  double z = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    z += (i & bit) ? -probs[i] : probs[i];
  }
  return z;
}

double z_expectation(const Statevector& state, int qubit) {
  const std::size_t bit = std::size_t{1}
                          << qubit_shift(state.num_qubits(), qubit);
  double z = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const double p = std::norm(state[i]);
    z += (i & bit) ? -p : p;
  }
  return z;
}

}  // namespace qcov
