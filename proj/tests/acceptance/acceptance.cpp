// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes within its runtime limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qcov/attacks.hpp"
#include "qcov/coverage.hpp"
#include "qcov/fuzz.hpp"
#include "qcov/gradients.hpp"
#include "qcov/qnn.hpp"
#include "toy.hpp"

using namespace qcov;

namespace {

// Tolerances.
constexpr double kSimTol = 1e-10;
constexpr double kClosedFormTol = 1e-12;
constexpr double kParamGradTol = 1e-6;
constexpr double kInputGradTol = 1e-5;
constexpr double kShotsDeviationTol = 5.0;  // percentage points at 1e5 shots

// Seeded repetitions.
constexpr int kOracleInstances = 100;
constexpr int kMonotoneInstances = 100;
constexpr int kSimCircuits = 50;
constexpr int kGradDraws = 20;
constexpr int kDirectionSeeds = 10;
constexpr int kFuzzRuns = 20;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> uniform(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CoverageReport mean_report(const std::vector<CoverageReport>& rs) {
  CoverageReport m;
  for (const auto& r : rs) {
    m.ksc += r.ksc / static_cast<double>(rs.size());
    m.scc += r.scc / static_cast<double>(rs.size());
    m.tsc += r.tsc / static_cast<double>(rs.size());
  }
  return m;
}

std::string triple(const CoverageReport& r) {
  return fmt("KSC %.2f SCC %.2f TSC %.2f", r.ksc, r.scc, r.tsc);
}

// 1. Two-qubit worked example from the bundled fixture files.
Outcome worked_example() {
  const std::string dir = QCOV_DATA_DIR;
  const auto profile = load_profile(dir + "/worked_profile.json");
  const auto vecs = read_prob_vectors_csv(dir + "/worked_probs.csv");
  CoverageConfig cfg;
  cfg.k_cells = 5;
  const auto r = coverage_of_vectors(vecs, profile, cfg);
  return {r.ksc == 15.0 && r.scc == 12.5 && r.tsc == 25.0, triple(r)};
}

// 2. Incremental tracker vs brute-force recomputation.
Outcome oracle_equivalence() {
  int mismatches = 0;
  for (int inst = 0; inst < kOracleInstances; ++inst) {
    const std::uint64_t seed = 50000 + static_cast<std::uint64_t>(inst);
    std::mt19937_64 rng(seed);
    const int q = 1 + inst % 4;
    const std::size_t n = std::size_t{1} << q;
    const auto profile = testing::random_profile(n, seed);
    CoverageConfig cfg;
    cfg.k_cells = 1 + rng() % 200;
    cfg.top_k = 1 + rng() % n;
    cfg.boundary_mode = inst % 2 ? BoundaryMode::Sigma : BoundaryMode::Raw;
    std::vector<ProbVector> suite;
    const std::size_t size = rng() % 51;
    for (std::size_t i = 0; i < size; ++i)
      suite.push_back(testing::random_prob_vector(n, seed * 100 + i, i % 3 == 0 ? 20 : 0));
    CoverageTracker t(profile, cfg);
    for (const auto& pv : suite) t.add_input(pv);
    if (!(t.report() == testing::brute_force_coverage(suite, profile, cfg))) ++mismatches;
  }
  return {mismatches == 0, fmt("%d/%d instances differ", mismatches, kOracleInstances)};
}

// 3. Monotonicity under union, and zero SCC on the profiling set itself.
Outcome monotonicity() {
  int violations = 0;
  int nonzero_scc = 0;
  for (int inst = 0; inst < kMonotoneInstances; ++inst) {
    const std::uint64_t seed = 60000 + static_cast<std::uint64_t>(inst);
    const int q = 1 + inst % 4;
    const std::size_t n = std::size_t{1} << q;
    const auto profile = testing::random_profile(n, seed);
    CoverageConfig cfg;
    cfg.k_cells = 1 + static_cast<std::size_t>(inst) % 50;
    std::vector<ProbVector> a, b;
    for (int i = 0; i < 20; ++i) a.push_back(testing::random_prob_vector(n, seed * 7 + i, i % 2 ? 20 : 0));
    for (int i = 0; i < 20; ++i) b.push_back(testing::random_prob_vector(n, seed * 11 + i));
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const auto ra = coverage_of_vectors(a, profile, cfg);
    const auto rb = coverage_of_vectors(b, profile, cfg);
    const auto rab = coverage_of_vectors(ab, profile, cfg);
    for (auto c : {Criterion::KSC, Criterion::SCC, Criterion::TSC})
      if (rab.value(c) < std::max(ra.value(c), rb.value(c))) ++violations;

    const auto own = profile_from_vectors(a);
    if (coverage_of_vectors(a, own, cfg).scc != 0.0) ++nonzero_scc;
  }
  return {violations == 0 && nonzero_scc == 0,
          fmt("%d union violations, %d profiling sets with SCC > 0", violations, nonzero_scc)};
}

// 4. Simulator vs dense matrices, plus closed forms.
Outcome simulator() {
  double worst = 0.0;
  for (int i = 0; i < kSimCircuits; ++i) {
    const std::uint64_t seed = 70000 + static_cast<std::uint64_t>(i);
    const int q = 1 + i % 4;
    const auto circuit = testing::random_circuit(q, 16, seed);
    const auto params = uniform(circuit.num_params, seed + 1, -std::numbers::pi, std::numbers::pi);
    const auto input = haar_random_state(q, seed + 2);
    const std::vector<Amplitude> in(input.amplitudes().begin(), input.amplitudes().end());
    const auto expected = testing::dense_apply(testing::dense_unitary(circuit, params), in);
    const auto got = apply_circuit(input, circuit, params);
    for (std::size_t k = 0; k < expected.size(); ++k)
      worst = std::max(worst, std::abs(got[k] - expected[k]));
  }

  double closed = 0.0;
  const double r = 1.0 / std::sqrt(2.0);
  const auto bell = apply_circuit(Statevector(2), {2, {GateOp::h(0), GateOp::cnot(0, 1)}, 0}, {});
  const Amplitude bell_expected[4] = {r, 0.0, 0.0, r};
  for (std::size_t k = 0; k < 4; ++k) closed = std::max(closed, std::abs(bell[k] - bell_expected[k]));
  const double theta = 1.234;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const std::vector<double> p{theta};
  const auto rx = apply_circuit(Statevector(1), {1, {GateOp::rx(0, 0)}, 1}, p);
  const auto ry = apply_circuit(Statevector(1), {1, {GateOp::ry(0, 0)}, 1}, p);
  const auto rz = apply_circuit(Statevector::basis(1, 1), {1, {GateOp::rz(0, 0)}, 1}, p);
  closed = std::max({closed, std::abs(rx[0] - Amplitude(c, 0)), std::abs(rx[1] - Amplitude(0, -s)),
                     std::abs(ry[0] - Amplitude(c, 0)), std::abs(ry[1] - Amplitude(s, 0)),
                     std::abs(rz[0]), std::abs(rz[1] - Amplitude(c, s))});
  return {worst < kSimTol && closed < kClosedFormTol,
          fmt("max oracle error %.2e, max closed-form error %.2e", worst, closed)};
}

double score_at(QnnModel m, std::span<const double> params, std::span<const double> x, int cls) {
  m.params.assign(params.begin(), params.end());
  return forward(m, x).scores[static_cast<std::size_t>(cls)];
}

// 5. Parameter-shift and input gradients vs central differences.
Outcome gradients() {
  double worst_param = 0.0;
  double worst_input = 0.0;
  for (auto preset : {AnsatzPreset::LayeredRot, AnsatzPreset::StronglyEntangling}) {
    for (int draw = 0; draw < kGradDraws; ++draw) {
      const std::uint64_t seed = 80000 + static_cast<std::uint64_t>(draw);
      const auto enc = draw % 2 ? EncoderSpec{EncoderKind::Amplitude, 16}
                                : EncoderSpec{EncoderKind::Angle, 4};
      const auto m = make_model(enc, {preset, 2, Entanglement::Cyclic}, 4, 2, seed);
      const auto x = uniform(enc.input_dim, seed + 1, 0.05, 0.95);
      const auto jac = param_shift_jacobian(m, x);
      for (int cls = 0; cls < 2; ++cls) {
        const auto fd = finite_diff_grad(
            [&](std::span<const double> p) { return score_at(m, p, x, cls); }, m.params,
            kParamFiniteDiffStep);
        for (std::size_t j = 0; j < fd.size(); ++j)
          worst_param = std::max(worst_param, std::abs(jac[static_cast<std::size_t>(cls)][j] - fd[j]));
      }
      const int label = draw % 2;
      const auto g = input_grad(m, x, label);
      const auto fd = finite_diff_grad(
          [&](std::span<const double> v) { return cross_entropy(forward(m, v).scores, label); },
          x, kInputFiniteDiffStep);
      for (std::size_t i = 0; i < x.size(); ++i)
        worst_input = std::max(worst_input, std::abs(g[i] - fd[i]));
    }
  }
  return {worst_param < kParamGradTol && worst_input < kInputGradTol,
          fmt("max parameter error %.2e, max input error %.2e", worst_param, worst_input)};
}

// 6. Diverse and larger suites cover at least as much.
Outcome diversity_direction(const testing::ToyFixture& toy) {
  const CoverageConfig cfg;
  std::vector<CoverageReport> one, two, small, large;
  for (int s = 0; s < kDirectionSeeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    one.push_back(coverage_suite(toy.model, toy.test.filter_class(0).sample_per_class(40, seed),
                                 toy.profile, cfg));
    two.push_back(coverage_suite(toy.model, toy.test.sample_per_class(20, seed), toy.profile, cfg));
    small.push_back(coverage_suite(toy.model, toy.test.sample_per_class(10, seed), toy.profile, cfg));
    large.push_back(coverage_suite(toy.model, toy.test.sample_per_class(40, seed), toy.profile, cfg));
  }
  const auto m1 = mean_report(one), m2 = mean_report(two);
  const auto ms = mean_report(small), ml = mean_report(large);
  bool ok = true;
  for (auto c : {Criterion::KSC, Criterion::SCC, Criterion::TSC})
    ok = ok && m2.value(c) >= m1.value(c) && ml.value(c) >= ms.value(c);
  return {ok, "one-class " + triple(m1) + " | two-class " + triple(m2) + " | small " +
                  triple(ms) + " | large " + triple(ml)};
}

// 7. Appending FGSM inputs raises KSC and SCC.
Outcome adversarial_direction(const testing::ToyFixture& toy) {
  const CoverageConfig cfg;
  AttackConfig ac;
  ac.kind = AttackKind::FGSM;
  ac.epsilon = 0.25;
  std::vector<CoverageReport> org, comb;
  for (int s = 0; s < kDirectionSeeds; ++s) {
    const auto suite = toy.test.sample_per_class(30, 300 + static_cast<std::uint64_t>(s));
    const auto adv = attack_dataset(toy.model, suite, ac);
    org.push_back(coverage_suite(toy.model, suite, toy.profile, cfg));
    comb.push_back(coverage_suite(toy.model, suite.merged(adv.adversarial), toy.profile, cfg));
  }
  const auto mo = mean_report(org), mc = mean_report(comb);
  return {mc.ksc > mo.ksc && mc.scc > mo.scc, "Org " + triple(mo) + " | Org+FGSM " + triple(mc)};
}

// 8. Guided fuzzing vs random testing at equal budget. The random arm gets
// the guided run's iteration count and its observed re-enqueue rate.
Outcome fuzzing_direction(const testing::ToyFixture& toy) {
  bool ok = true;
  std::string detail;
  for (auto crit : {Criterion::KSC, Criterion::SCC, Criterion::TSC}) {
    double guided = 0.0, random = 0.0;
    for (int s = 0; s < kFuzzRuns; ++s) {
      FuzzConfig fc;
      fc.criterion = crit;
      fc.seed = static_cast<std::uint64_t>(s);
      const auto seeds = toy.test.sample_per_class(25, 100 + static_cast<std::uint64_t>(s));
      const auto g = fuzz(toy.model, seeds, toy.profile, fc);
      FuzzConfig rc = fc;
      rc.max_iterations = g.iterations;
      rc.reenqueue_probability =
          g.iterations ? static_cast<double>(g.retained.size()) / static_cast<double>(g.iterations) : 0.0;
      guided += g.tsr / kFuzzRuns;
      random += random_test(toy.model, seeds, rc).tsr / kFuzzRuns;
    }
    ok = ok && guided > random;
    detail += fmt("%s guided %.2f vs random %.2f; ", to_string(crit).c_str(), guided, random);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// 9. Sampled coverage converges to the exact report.
Outcome shots_convergence(const testing::ToyFixture& toy) {
  const CoverageConfig cfg;
  const auto exact = coverage_suite(toy.model, toy.test, toy.profile, cfg);
  std::vector<double> total;
  double dk_last = 0.0, dt_last = 0.0;
  std::string detail;
  for (std::uint64_t shots : {100ULL, 1000ULL, 10000ULL, 100000ULL}) {
    double dk = 0.0, ds = 0.0, dt = 0.0;
    for (int s = 0; s < kDirectionSeeds; ++s) {
      const auto r = coverage_suite(toy.model, toy.test, toy.profile, cfg, shots,
                                    1000 * static_cast<std::uint64_t>(s));
      dk += std::abs(r.ksc - exact.ksc) / kDirectionSeeds;
      ds += std::abs(r.scc - exact.scc) / kDirectionSeeds;
      dt += std::abs(r.tsc - exact.tsc) / kDirectionSeeds;
    }
    total.push_back(dk + ds + dt);
    dk_last = dk;
    dt_last = dt;
    detail += fmt("1e%d: dKSC %.2f dSCC %.2f dTSC %.2f; ",
                  static_cast<int>(std::lround(std::log10(static_cast<double>(shots)))), dk, ds, dt);
  }
  detail.resize(detail.size() - 2);
  const bool converging = std::is_sorted(total.rbegin(), total.rend());
  return {converging && dk_last < kShotsDeviationTol && dt_last < kShotsDeviationTol, detail};
}

// 10. MAD bounds nest in raw bounds and narrow the spread across skewed
// profiling selections.
Outcome mad_stability(const testing::ToyFixture& toy) {
  const CoverageConfig raw_cfg;
  CoverageConfig mad_cfg;
  mad_cfg.boundary_mode = BoundaryMode::Mad;
  const auto suite = collect_probabilities(toy.model, toy.test);
  int nesting_violations = 0;
  double raw_k = 0, raw_s = 0, mad_k = 0, mad_s = 0;
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  for (int s = 0; s < kDirectionSeeds; ++s) {
    std::vector<double> rk, rs, mk, ms;
    for (const auto& set : testing::skewed_profiling_sets(toy, 200, static_cast<std::uint64_t>(s))) {
      const auto vecs = collect_probabilities(toy.model, set);
      const auto p = mad_refine(profile_from_vectors(vecs), per_state_samples(vecs), 0.99);
      for (std::size_t st = 0; st < p.num_states; ++st) {
        if (!(p.lower[st] <= (*p.mad_lower)[st] && (*p.mad_lower)[st] <= (*p.mad_upper)[st] &&
              (*p.mad_upper)[st] <= p.upper[st]))
          ++nesting_violations;
      }
      const auto r = coverage_of_vectors(suite, p, raw_cfg);
      const auto m = coverage_of_vectors(suite, p, mad_cfg);
      rk.push_back(r.ksc);
      rs.push_back(r.scc);
      mk.push_back(m.ksc);
      ms.push_back(m.scc);
    }
    raw_k += spread(rk) / kDirectionSeeds;
    raw_s += spread(rs) / kDirectionSeeds;
    mad_k += spread(mk) / kDirectionSeeds;
    mad_s += spread(ms) / kDirectionSeeds;
  }
  return {nesting_violations == 0 && mad_k <= raw_k && mad_s <= raw_s,
          fmt("%d nesting violations; spread KSC raw %.2f vs MAD %.2f, SCC raw %.2f vs MAD %.2f",
              nesting_violations, raw_k, mad_k, raw_s, mad_s)};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto fixture_start = clock::now();
  const auto& toy = testing::toy_fixture();
  std::printf("toy classifier: train accuracy %.3f, test accuracy %.3f (%.2f s)\n",
              toy.train_accuracy, toy.test_accuracy,
              std::chrono::duration<double>(clock::now() - fixture_start).count());

  struct Criterion_ {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion_> criteria{
      {1, "worked two-qubit example", 1, worked_example},
      {2, "oracle equivalence", 30, oracle_equivalence},
      {3, "monotonicity", 30, monotonicity},
      {4, "simulator correctness", 10, simulator},
      {5, "gradient check", 60, gradients},
      {6, "suite diversity direction", 300, [&] { return diversity_direction(toy); }},
      {7, "adversarial inputs direction", 300, [&] { return adversarial_direction(toy); }},
      {8, "guided fuzzing direction", 600, [&] { return fuzzing_direction(toy); }},
      {9, "finite-shot convergence", 600, [&] { return shots_convergence(toy); }},
      {10, "MAD nesting and stabilization", 600, [&] { return mad_stability(toy); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = clock::now();
    const auto out = c.run();
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    const bool pass = out.pass && secs < c.limit_s;
    failures += !pass;
    std::printf("criterion %d: %s %s (%s) [%.2f s, limit %.0f s]\n", c.id, pass ? "PASS" : "FAIL",
                c.name, out.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
