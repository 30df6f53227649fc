#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcov/diversity.hpp"
#include "qcov/error.hpp"

using namespace qcov;

namespace {

Statevector single(Amplitude a0, Amplitude a1) { return Statevector(1, {a0, a1}); }

std::vector<Statevector> literal_states() {
  return {single(1.0, 0.0), single(std::cos(0.4), std::sin(0.4)),
          single(std::cos(0.3), Amplitude(0.0, std::sin(0.3))), single(0.6, Amplitude(0.0, 0.8))};
}

}  // namespace

TEST_CASE("pairwise fidelities of literal states") {
  const auto states = literal_states();
  const auto pf = pairwise_fidelities(states, 1000, 0);
  const std::vector<double> expected{0.8483533546735827, 0.9126678074548391, 0.36,
                                     0.7875084301853706, 0.4024610606913968, 0.6554814011422618};
  REQUIRE(pf.values.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(pf.values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(pf.mean == doctest::Approx(0.6610786756912419).epsilon(1e-12));
  CHECK(closest_neighbor_fidelity(states) == doctest::Approx(0.8322925926813807).epsilon(1e-12));
}

TEST_CASE("JS divergence of literal histograms") {
  const std::vector<double> a{0.11, 0.13, 0.55, 0.57, 0.97};
  const std::vector<double> b{0.13, 0.31, 0.55, 0.91, 1.0, 1.0};
  const auto ha = FidelityHistogram::from_values(a);
  const auto hb = FidelityHistogram::from_values(b);
  CHECK(js_divergence(ha, hb) == doctest::Approx(0.6355222557917826).epsilon(1e-12));
  CHECK(js_divergence(hb, ha) == doctest::Approx(js_divergence(ha, hb)));
  CHECK(js_divergence(ha, ha) == 0.0);
}

TEST_CASE("histogram binning") {
  CHECK(FidelityHistogram::bin_of(0.0) == 0);
  CHECK(FidelityHistogram::bin_of(0.02) == 1);
  CHECK(FidelityHistogram::bin_of(1.0) == kFidelityBins - 1);
  const auto h = FidelityHistogram::from_values(std::vector<double>{0.1, 0.3, 1.0});
  CHECK(h.bin_edges.size() == kFidelityBins + 1);
  CHECK(h.bin_edges.back() == 1.0);
  CHECK(std::accumulate(h.densities.begin(), h.densities.end(), 0.0) == doctest::Approx(1.0));
  CHECK(h.densities[kFidelityBins - 1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("identical states are maximally far from Haar") {
  std::vector<Statevector> states(20, Statevector::basis(3, 2));
  DiversityConfig cfg;
  cfg.num_haar_samples = 200;
  const auto r = state_diversity(states, cfg);
  CHECK(r.mean_fidelity == doctest::Approx(1.0));
  CHECK(r.closest_neighbor_fidelity == doctest::Approx(1.0));
  CHECK(r.js_vs_haar > 0.95);
  CHECK(r.js_vs_haar <= 1.0);
}

TEST_CASE("Haar states are close to the Haar reference") {
  std::vector<Statevector> states;
  for (std::uint64_t i = 0; i < 300; ++i) states.push_back(haar_random_state(3, 1000 + i));
  DiversityConfig cfg;
  cfg.num_haar_samples = 300;
  const auto r = state_diversity(states, cfg);
  CHECK(r.js_vs_haar < 0.05);
  CHECK(r.mean_fidelity == doctest::Approx(1.0 / 8.0).epsilon(0.1));
}

TEST_CASE("pair subsampling") {
  std::vector<Statevector> states;
  for (std::uint64_t i = 0; i < 30; ++i) states.push_back(haar_random_state(2, i));
  const auto all = pairwise_fidelities(states, 1000, 0);
  CHECK(all.values.size() == 435);
  const auto sub = pairwise_fidelities(states, 100, 4);
  CHECK(sub.values.size() == 100);
  CHECK(sub.values == pairwise_fidelities(states, 100, 4).values);
  // Every sampled value is one of the full set.
  for (double v : sub.values)
    CHECK(std::find(all.values.begin(), all.values.end(), v) != all.values.end());
}

TEST_CASE("diversity input validation") {
  const std::vector<Statevector> one{Statevector(2)};
  CHECK_THROWS_AS(state_diversity(one, {}), ConfigError);
  CHECK_THROWS_AS(pairwise_fidelities(one, 10, 0), ConfigError);
  const auto h1 = FidelityHistogram::from_values(std::vector<double>{0.5});
  FidelityHistogram h2 = h1;
  h2.bin_edges.pop_back();
  CHECK_THROWS_AS(js_divergence(h1, h2), ConfigError);
}

TEST_CASE("suite diversity encodes the inputs") {
  LabeledDataset d(2);
  d.add(std::vector<double>{0.0, 0.0}, 0);
  d.add(std::vector<double>{1.0, 1.0}, 1);
  DiversityConfig cfg;
  cfg.num_haar_samples = 50;
  const auto r = suite_diversity({EncoderKind::Angle, 2}, 2, d, cfg);
  // RY(0)|00> and RY(pi)|00> = |11> are orthogonal.
  CHECK(r.mean_fidelity == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(histogram_to_csv(r.suite_hist).rfind("bin_left,bin_right,density\n", 0) == 0);
  CHECK(diversity_to_json(r).find("js_vs_haar") != std::string::npos);
}
