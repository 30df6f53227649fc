#include <benchmark/benchmark.h>

#include <random>

#include "qcov/coverage.hpp"
#include "qcov/gradients.hpp"
#include "qcov/qnn.hpp"
#include "qcov/simcore.hpp"

using namespace qcov;

namespace {

void BM_ApplyCircuit(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const auto circuit = expand_ansatz({AnsatzPreset::StronglyEntangling, 2, Entanglement::Cyclic}, q);
  std::vector<double> params(circuit.num_params, 0.3);
  const auto in = haar_random_state(q, 1);
  for (auto _ : state) benchmark::DoNotOptimize(apply_circuit(in, circuit, params));
  state.SetComplexityN(std::int64_t{1} << q);
}
BENCHMARK(BM_ApplyCircuit)->DenseRange(4, 14, 2)->Complexity();

void BM_TrackerAddInput(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  std::vector<ProbVector> vecs;
  for (std::uint64_t i = 0; i < 64; ++i) vecs.push_back(exact_probabilities(haar_random_state(q, i)));
  const auto profile = profile_from_vectors(vecs);
  CoverageConfig cfg;
  std::size_t i = 0;
  CoverageTracker t(profile, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(t.add_input(vecs[i++ % vecs.size()]));
}
BENCHMARK(BM_TrackerAddInput)->Arg(4)->Arg(8)->Arg(12);

void BM_ParamShiftJacobian(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const auto m = make_model({EncoderKind::Angle, static_cast<std::size_t>(q)},
                            {AnsatzPreset::LayeredRot, 2, Entanglement::Linear}, q, 2, 1);
  const std::vector<double> x(static_cast<std::size_t>(q), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(param_shift_jacobian(m, x));
}
BENCHMARK(BM_ParamShiftJacobian)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
