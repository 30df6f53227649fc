#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcov/dataset.hpp"
#include "qcov/qnn.hpp"
#include "qcov/simcore.hpp"

namespace qcov {

inline constexpr std::size_t kFidelityBins = 50;

/// Mass of pairwise fidelities in 50 uniform bins over [0, 1]. The last bin
/// is closed on the right so fidelity 1 lands in it.
struct FidelityHistogram {
  std::vector<double> bin_edges;  // kFidelityBins + 1 entries
  std::vector<double> densities;  // sums to 1
  std::size_t sample_count = 0;

  static FidelityHistogram from_values(std::span<const double> fidelities);
  static std::size_t bin_of(double fidelity);
};

struct PairwiseFidelities {
  std::vector<double> values;
  double mean = 0.0;
};

/// Fidelities over all i<j pairs, or a seeded uniform subsample of
/// `max_pairs` distinct pairs when there are more. Throws ConfigError for
/// fewer than two states.
PairwiseFidelities pairwise_fidelities(std::span<const Statevector> states,
                                       std::size_t max_pairs,
                                       std::uint64_t seed);

FidelityHistogram pairwise_fidelity_hist(std::span<const Statevector> states,
                                         std::size_t max_pairs,
                                         std::uint64_t seed);

/// Jensen-Shannon divergence with log base 2, in [0, 1].
double js_divergence(const FidelityHistogram& p, const FidelityHistogram& q);

/// Histogram of `num_states` Haar-random states on `num_qubits` qubits.
FidelityHistogram haar_fidelity_hist(int num_qubits, std::size_t num_states,
                                     std::size_t max_pairs, std::uint64_t seed);

/// Mean over states of the fidelity with their closest other state.
double closest_neighbor_fidelity(std::span<const Statevector> states);

struct DiversityReport {
  double js_vs_haar = 0.0;
  double mean_fidelity = 0.0;
  double closest_neighbor_fidelity = 0.0;
  FidelityHistogram suite_hist;
  FidelityHistogram haar_hist;
};

struct DiversityConfig {
  std::size_t num_haar_samples = 1000;
  std::size_t max_pairs = 100000;
  std::uint64_t seed = 0;
};

/// Diversity of an arbitrary list of states (input or output states).
DiversityReport state_diversity(std::span<const Statevector> states,
                                const DiversityConfig& config);

/// Encodes the suite with `encoder` and measures its input-state diversity.
DiversityReport suite_diversity(const EncoderSpec& encoder, int num_qubits,
                                const LabeledDataset& suite,
                                const DiversityConfig& config);

std::string histogram_to_csv(const FidelityHistogram& hist);
std::string diversity_to_json(const DiversityReport& report);

}  // namespace qcov
