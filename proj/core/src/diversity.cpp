#include "qcov/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "qcov/error.hpp"

namespace qcov {

std::size_t FidelityHistogram::bin_of(double fidelity) {
  const double f = std::clamp(fidelity, 0.0, 1.0);
  return std::min(kFidelityBins - 1,
                  static_cast<std::size_t>(f * static_cast<double>(kFidelityBins)));
}

FidelityHistogram FidelityHistogram::from_values(std::span<const double> fidelities) {
  FidelityHistogram h;
  h.bin_edges.resize(kFidelityBins + 1);
  for (std::size_t i = 0; i <= kFidelityBins; ++i) {
    h.bin_edges[i] = static_cast<double>(i) / static_cast<double>(kFidelityBins);
  }
  h.densities.assign(kFidelityBins, 0.0);
  for (double f : fidelities) h.densities[bin_of(f)] += 1.0;
  h.sample_count = fidelities.size();
  if (h.sample_count > 0) {
    for (double& d : h.densities) d /= static_cast<double>(h.sample_count);
  }
  return h;
}

PairwiseFidelities pairwise_fidelities(std::span<const Statevector> states,
                                       std::size_t max_pairs,
                                       std::uint64_t seed) {
  const std::size_t n = states.size();
  if (n < 2) throw ConfigError("pairwise fidelity needs at least two states");
  if (max_pairs == 0) throw ConfigError("max_pairs must be >= 1");
  const std::size_t total = n * (n - 1) / 2;

  std::vector<std::size_t> chosen;
  if (total <= max_pairs) {
    chosen.resize(total);
    for (std::size_t k = 0; k < total; ++k) chosen[k] = k;
  } else {
    // Floyd's algorithm: max_pairs distinct indices from [0, total).
    std::mt19937_64 rng(seed);
    std::unordered_set<std::size_t> picked;
    picked.reserve(max_pairs * 2);
    for (std::size_t j = total - max_pairs; j < total; ++j) {
      std::uniform_int_distribution<std::size_t> u(0, j);
      const std::size_t t = u(rng);
      if (!picked.insert(t).second) picked.insert(j);
    }
    chosen.assign(picked.begin(), picked.end());
    std::sort(chosen.begin(), chosen.end());
  }

  PairwiseFidelities out;
  out.values.reserve(chosen.size());
  // Chosen indices are sorted, so walk rows incrementally.
  std::size_t row = 0, row_start = 0, row_len = n - 1;
  double sum = 0.0;
  for (std::size_t idx : chosen) {
    while (idx >= row_start + row_len) {
      row_start += row_len;
      ++row;
      --row_len;
    }
    const std::size_t col = row + 1 + (idx - row_start);
    const double f = fidelity(states[row], states[col]);
    out.values.push_back(f);
    sum += f;
  }
  out.mean = sum / static_cast<double>(out.values.size());
  return out;
}

FidelityHistogram pairwise_fidelity_hist(std::span<const Statevector> states,
                                         std::size_t max_pairs,
                                         std::uint64_t seed) {
  return FidelityHistogram::from_values(
      pairwise_fidelities(states, max_pairs, seed).values);
}

double js_divergence(const FidelityHistogram& p, const FidelityHistogram& q) {
  if (p.densities.size() != q.densities.size() || p.bin_edges != q.bin_edges) {
    throw ConfigError("JS divergence needs histograms with identical binning");
  }
  double js = 0.0;
  for (std::size_t i = 0; i < p.densities.size(); ++i) {
    const double a = p.densities[i];
    const double b = q.densities[i];
    const double m = 0.5 * (a + b);
    if (a > 0.0) js += 0.5 * a * std::log2(a / m);
    if (b > 0.0) js += 0.5 * b * std::log2(b / m);
  }
  return std::clamp(js, 0.0, 1.0);
}

FidelityHistogram haar_fidelity_hist(int num_qubits, std::size_t num_states,
                                     std::size_t max_pairs, std::uint64_t seed) {
  std::vector<Statevector> states;
  states.reserve(num_states);
  std::mt19937_64 seeder(seed);
  for (std::size_t i = 0; i < num_states; ++i) {
    states.push_back(haar_random_state(num_qubits, seeder()));
  }
  return pairwise_fidelity_hist(states, max_pairs, seeder());
}

double closest_neighbor_fidelity(std::span<const Statevector> states) {
  const std::size_t n = states.size();
  if (n < 2) throw ConfigError("closest-neighbour fidelity needs two states");
  std::vector<double> best(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double f = fidelity(states[i], states[j]);
      best[i] = std::max(best[i], f);
      best[j] = std::max(best[j], f);
    }
  }
  double sum = 0.0;
  for (double b : best) sum += b;
  return sum / static_cast<double>(n);
}

DiversityReport state_diversity(std::span<const Statevector> states,
                                const DiversityConfig& config) {
  if (states.size() < 2) throw ConfigError("diversity needs at least two states");
  DiversityReport r;
  const auto pairs = pairwise_fidelities(states, config.max_pairs, config.seed);
  r.suite_hist = FidelityHistogram::from_values(pairs.values);
  r.mean_fidelity = pairs.mean;
  r.closest_neighbor_fidelity = closest_neighbor_fidelity(states);
  r.haar_hist = haar_fidelity_hist(states.front().num_qubits(),
                                   config.num_haar_samples, config.max_pairs,
                                   config.seed ^ 0x9e3779b97f4a7c15ULL);
  r.js_vs_haar = js_divergence(r.suite_hist, r.haar_hist);
  return r;
}

DiversityReport suite_diversity(const EncoderSpec& encoder, int num_qubits,
                                const LabeledDataset& suite,
                                const DiversityConfig& config) {
  std::vector<Statevector> states;
  states.reserve(suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) {
    states.push_back(encode(encoder, suite.row(i), num_qubits));
  }
  return state_diversity(states, config);
}

}  // namespace qcov
