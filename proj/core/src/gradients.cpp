#include "qcov/gradients.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcov/error.hpp"

namespace qcov {

namespace {

constexpr double kShift = std::numbers::pi / 2.0;

std::vector<double> readout_scores(const QnnModel& model, const Statevector& s) {
  std::vector<double> out(static_cast<std::size_t>(model.num_classes));
  for (int c = 0; c < model.num_classes; ++c) {
    out[static_cast<std::size_t>(c)] =
        z_expectation(s, model.readout_qubits[static_cast<std::size_t>(c)]);
  }
  return out;
}

// Runs `circuit` on `input` with the angle of gate `shifted_gate` offset by
// `delta` (gate-local shift, so shared slots are differentiated per use).
Statevector run_shifted(const Statevector& input, const CircuitSpec& circuit,
                        std::span<const double> params,
                        std::size_t shifted_gate, double delta) {
  Statevector s = input;
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const GateOp& op = circuit.gates[g];
    double angle = op.param_slot ? params[*op.param_slot] : 0.0;
    if (g == shifted_gate) angle += delta;
    apply_gate(s.mutable_amplitudes(), s.num_qubits(), op, angle);
  }
  return s;
}

void require_two_term_rule(const CircuitSpec& circuit) {
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const GateOp& op = circuit.gates[g];
    if (op.param_slot && is_controlled(op.kind)) {
      throw GradientError("gate " + std::to_string(g) + " (" +
                          std::string(to_string(op.kind)) +
                          ") is not supported by the two-term shift rule");
    }
  }
}

}  // namespace

std::vector<std::vector<double>> param_shift_jacobian(
    const QnnModel& model, std::span<const double> x) {
  model.validate();
  require_two_term_rule(model.circuit);
  const Statevector input = encode(model.encoder, x, model.num_qubits);
  std::vector<std::vector<double>> jac(
      static_cast<std::size_t>(model.num_classes),
      std::vector<double>(model.params.size(), 0.0));
  for (std::size_t g = 0; g < model.circuit.gates.size(); ++g) {
    const GateOp& op = model.circuit.gates[g];
    if (!op.param_slot) continue;
    const auto plus = readout_scores(
        model, run_shifted(input, model.circuit, model.params, g, kShift));
    const auto minus = readout_scores(
        model, run_shifted(input, model.circuit, model.params, g, -kShift));
    for (std::size_t c = 0; c < jac.size(); ++c) {
      jac[c][*op.param_slot] += 0.5 * (plus[c] - minus[c]);
    }
  }
  return jac;
}

std::vector<double> param_shift_grad(const QnnModel& model,
                                     std::span<const double> x,
                                     int readout_index) {
  if (readout_index < 0 || readout_index >= model.num_classes) {
    throw DimensionError("readout index " + std::to_string(readout_index) +
                         " out of range");
  }
  return param_shift_jacobian(model, x)[static_cast<std::size_t>(readout_index)];
}

std::vector<double> loss_param_grad(const QnnModel& model,
                                    std::span<const double> x, int label,
                                    const LossSpec& loss) {
  const auto jac = param_shift_jacobian(model, x);
  const auto scores = forward(model, x).scores;
  const auto dl_ds = cross_entropy_score_grad(scores, label, loss);
  std::vector<double> grad(model.params.size(), 0.0);
  for (std::size_t c = 0; c < jac.size(); ++c)
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += dl_ds[c] * jac[c][j];
  return grad;
}

namespace {

// Amplitude encoding: psi = v / |v| with v the zero-padded input. For class
// observable A_c = U^dag Z_c U and real psi, score_c = psi^T Re(A_c) psi and
//   d score_c / d v = (2 / |v|) (Re(A_c psi) - score_c psi),
// the tangent-space projection of the raw gradient.
std::vector<std::vector<double>> amplitude_input_jacobian(
    const QnnModel& model, std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  if (!(sq > 0.0)) {
    throw GradientError("input gradient undefined for an all-zero input under "
                        "amplitude encoding");
  }
  const double norm = std::sqrt(sq);
  const Statevector psi = encode(model.encoder, x, model.num_qubits);
  const Statevector phi = apply_circuit(psi, model.circuit, model.params);

  std::vector<std::vector<double>> jac;
  for (int c = 0; c < model.num_classes; ++c) {
    const int qb = model.readout_qubits[static_cast<std::size_t>(c)];
    const std::size_t bit = std::size_t{1} << qubit_shift(model.num_qubits, qb);
    std::vector<Amplitude> zphi(phi.amplitudes().begin(), phi.amplitudes().end());
    double score = 0.0;
    for (std::size_t i = 0; i < zphi.size(); ++i) {
      if (i & bit) zphi[i] = -zphi[i];
      score += std::real(std::conj(phi[i]) * zphi[i]);
    }
    const Statevector back = apply_circuit_adjoint(
        Statevector(model.num_qubits, std::move(zphi)), model.circuit,
        model.params);
    std::vector<double> row(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a_psi = std::real(back[i]);
      row[i] = 2.0 / norm * (a_psi - score * std::real(psi[i]));
    }
    jac.push_back(std::move(row));
  }
  return jac;
}

// Angle encoding: shift each encoding RY by +-pi/2 and chain with
// d angle / d x = pi. Features repeated over several qubits sum their terms.
std::vector<std::vector<double>> angle_input_jacobian(const QnnModel& model,
                                                      std::span<const double> x) {
  const int q = model.num_qubits;
  const CircuitSpec enc = angle_encoding_circuit(q);
  std::vector<double> angles(static_cast<std::size_t>(q));
  for (int qb = 0; qb < q; ++qb) {
    angles[static_cast<std::size_t>(qb)] =
        std::numbers::pi * x[static_cast<std::size_t>(qb) % x.size()];
  }
  std::vector<std::vector<double>> jac(
      static_cast<std::size_t>(model.num_classes), std::vector<double>(x.size(), 0.0));
  for (int qb = 0; qb < q; ++qb) {
    const std::size_t g = static_cast<std::size_t>(qb);
    const auto eval = [&](double delta) {
      const Statevector in = run_shifted(Statevector(q), enc, angles, g, delta);
      return readout_scores(model, apply_circuit(in, model.circuit, model.params));
    };
    const auto plus = eval(kShift);
    const auto minus = eval(-kShift);
    const std::size_t feature = g % x.size();
    for (std::size_t c = 0; c < jac.size(); ++c) {
      jac[c][feature] += std::numbers::pi * 0.5 * (plus[c] - minus[c]);
    }
  }
  return jac;
}

}  // namespace

std::vector<std::vector<double>> input_score_jacobian(
    const QnnModel& model, std::span<const double> x) {
  model.validate();
  if (x.size() != model.encoder.input_dim) {
    throw DimensionError("input has " + std::to_string(x.size()) +
                         " features, encoder expects " +
                         std::to_string(model.encoder.input_dim));
  }
  return model.encoder.kind == EncoderKind::Amplitude
             ? amplitude_input_jacobian(model, x)
             : angle_input_jacobian(model, x);
}

std::vector<double> input_grad(const QnnModel& model, std::span<const double> x,
                               int label, const LossSpec& loss) {
  const auto jac = input_score_jacobian(model, x);
  const auto scores = forward(model, x).scores;
  const auto dl_ds = cross_entropy_score_grad(scores, label, loss);
  std::vector<double> grad(x.size(), 0.0);
  for (std::size_t c = 0; c < jac.size(); ++c)
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += dl_ds[c] * jac[c][i];
  return grad;
}

std::vector<double> finite_diff_grad(const ScalarFn& f,
                                     std::span<const double> x, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be > 0");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double up = f(probe);
    probe[i] = orig - h;
    const double down = f(probe);
    probe[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace qcov
