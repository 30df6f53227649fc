#include <doctest.h>

#include <cmath>
#include <random>

#include "qcov/error.hpp"
#include "qcov/gradients.hpp"

using namespace qcov;

namespace {

std::vector<double> uniform(std::size_t n, unsigned long long seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double score(QnnModel m, std::span<const double> params, std::span<const double> x, int c) {
  m.params.assign(params.begin(), params.end());
  return forward(m, x).scores[static_cast<std::size_t>(c)];
}

}  // namespace

TEST_CASE("parameter-shift matches finite differences for both presets") {
  for (auto preset : {AnsatzPreset::LayeredRot, AnsatzPreset::StronglyEntangling}) {
    for (unsigned long long draw = 0; draw < 4; ++draw) {
      auto m = make_model({EncoderKind::Angle, 4}, {preset, 2, Entanglement::Cyclic}, 4, 2,
                          draw + 1);
      const auto x = uniform(4, draw + 50, 0.0, 1.0);
      const auto jac = param_shift_jacobian(m, x);
      for (int c = 0; c < 2; ++c) {
        const auto fd = finite_diff_grad(
            [&](std::span<const double> p) { return score(m, p, x, c); }, m.params,
            kParamFiniteDiffStep);
        for (std::size_t j = 0; j < fd.size(); ++j) {
          CHECK(std::abs(jac[static_cast<std::size_t>(c)][j] - fd[j]) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("shared parameter slots accumulate shift terms") {
  QnnModel m = make_model({EncoderKind::Angle, 2},
                          {AnsatzPreset::LayeredRot, 1, Entanglement::Linear}, 2, 2, 3);
  for (auto& g : m.circuit.gates)
    if (g.param_slot) g.param_slot = *g.param_slot % 2;
  const std::vector<double> x{0.3, 0.8};
  const auto grad = param_shift_grad(m, x, 0);
  const auto fd = finite_diff_grad(
      [&](std::span<const double> p) { return score(m, p, x, 0); }, m.params,
      kParamFiniteDiffStep);
  for (std::size_t j = 0; j < fd.size(); ++j) CHECK(std::abs(grad[j] - fd[j]) < 1e-6);
}

TEST_CASE("trainable controlled rotations are rejected") {
  QnnModel m = make_model({EncoderKind::Angle, 2},
                          {AnsatzPreset::LayeredRot, 1, Entanglement::Linear}, 2, 2, 3);
  m.circuit.gates.push_back(GateOp::crx(0, 1, 0));
  CHECK_THROWS_AS(param_shift_grad(m, std::vector<double>{0.1, 0.2}, 0), GradientError);
}

TEST_CASE("input gradients match finite differences") {
  const LossSpec loss{};
  SUBCASE("angle") {
    const auto m = make_model({EncoderKind::Angle, 3},
                              {AnsatzPreset::LayeredRot, 2, Entanglement::Full}, 4, 2, 5);
    for (unsigned long long draw = 0; draw < 5; ++draw) {
      const auto x = uniform(3, draw, 0.05, 0.95);
      const auto g = input_grad(m, x, 1, loss);
      const auto fd = finite_diff_grad(
          [&](std::span<const double> v) { return cross_entropy(forward(m, v).scores, 1); }, x,
          kInputFiniteDiffStep);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(g[i] - fd[i]) < 1e-5);
    }
  }
  SUBCASE("amplitude") {
    const auto m = make_model({EncoderKind::Amplitude, 6},
                              {AnsatzPreset::StronglyEntangling, 2, Entanglement::Star}, 3, 3,
                              6);
    for (unsigned long long draw = 0; draw < 5; ++draw) {
      const auto x = uniform(6, draw + 10, 0.05, 0.95);
      const auto g = input_grad(m, x, 2, loss);
      const auto fd = finite_diff_grad(
          [&](std::span<const double> v) { return cross_entropy(forward(m, v).scores, 2); }, x,
          kInputFiniteDiffStep);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(g[i] - fd[i]) < 1e-5);
    }
    CHECK_THROWS_AS(input_grad(m, std::vector<double>(6, 0.0), 0), GradientError);
  }
}

TEST_CASE("amplitude input gradient is orthogonal to the input") {
  // Scores depend only on x / |x|, so scaling x leaves them unchanged.
  const auto m = make_model({EncoderKind::Amplitude, 4},
                            {AnsatzPreset::LayeredRot, 2, Entanglement::Linear}, 2, 2, 8);
  const auto x = uniform(4, 3, 0.1, 0.9);
  const auto jac = input_score_jacobian(m, x);
  for (const auto& row : jac) {
    double dot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += row[i] * x[i];
    CHECK(std::abs(dot) < 1e-12);
  }
}

TEST_CASE("input gradient vanishes at an interior loss minimum") {
  // One feature drives both qubits; scan for an interior minimum of the loss
  // along it, refine by golden-section search and check the gradient there.
  bool found = false;
  for (unsigned long long seed = 0; seed < 40 && !found; ++seed) {
    const auto m = make_model({EncoderKind::Angle, 1},
                              {AnsatzPreset::LayeredRot, 1, Entanglement::Linear}, 2, 2, seed);
    auto f = [&](double v) {
      const std::vector<double> x{v};
      return cross_entropy(forward(m, x).scores, 0);
    };
    const int n = 200;
    for (int i = 1; i < n && !found; ++i) {
      const double a = (i - 1.0) / n, b = (i + 0.0) / n, c = (i + 1.0) / n;
      if (!(f(b) < f(a) && f(b) < f(c))) continue;
      double lo = a, hi = c;
      const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
      for (int it = 0; it < 200; ++it) {
        const double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        if (f(x1) < f(x2)) hi = x2;
        else lo = x1;
      }
      const std::vector<double> xmin{0.5 * (lo + hi)};
      const auto g = input_grad(m, xmin, 0);
      CHECK(std::abs(g[0]) < 1e-6);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("finite differences reject a non-positive step") {
  CHECK_THROWS_AS(
      finite_diff_grad([](std::span<const double>) { return 0.0; }, std::vector<double>{1.0}, 0.0),
      ConfigError);
}
