#pragma once

// State-level coverage of a classifier's measured output distribution.
//
// Profiling records, for every basis state s, the lowest and highest
// probability l(s), u(s) seen on profiling data. [LB, UB] is the state's
// major region, split into k equal cells; [0, LB) and (UB, 1] are its two
// corner regions.
//
//   KSC = covered cells / (k * |S|)
//   SCC = covered corner regions / (2 * |S|)   (lower and upper counted apart)
//   TSC = states that ranked in some input's top-k / |S|

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcov/dataset.hpp"
#include "qcov/qnn.hpp"
#include "qcov/simcore.hpp"

namespace qcov {

struct StateProfile {
  std::size_t num_states = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> sigma;
  std::optional<std::vector<double>> mad_lower;
  std::optional<std::vector<double>> mad_upper;
  std::size_t num_samples = 0;
  std::string digest;

  bool has_mad() const noexcept { return mad_lower.has_value() && mad_upper.has_value(); }
  /// Checks 0 <= l <= u <= 1 and, when present, l <= mad_l <= mad_u <= u.
  void validate() const;
};

enum class BoundaryMode { Raw, Sigma, Mad };

std::string to_string(BoundaryMode m);
BoundaryMode boundary_mode_from_string(const std::string& s);

struct CoverageConfig {
  std::size_t k_cells = 100;
  std::size_t top_k = 1;
  BoundaryMode boundary_mode = BoundaryMode::Raw;
  double epsilon_degenerate = 1e-12;

  void validate() const;
};

enum class Criterion { KSC, SCC, TSC };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

/// Probability vectors of every row, in row order.
std::vector<ProbVector> collect_probabilities(
    const QnnModel& model, const LabeledDataset& data,
    std::optional<std::uint64_t> shots = std::nullopt, std::uint64_t seed = 0,
    unsigned threads = 1);

/// Per-state min/max and sample standard deviation over `vectors`.
StateProfile profile_from_vectors(std::span<const ProbVector> vectors,
                                  std::string digest = {});

/// Profiles `model` on `data`. With shots set, row i is sampled with seed
/// `seed + i`. Throws ConfigError on an empty dataset.
StateProfile profile(const QnnModel& model, const LabeledDataset& data,
                     std::optional<std::uint64_t> shots = std::nullopt,
                     std::uint64_t seed = 0, unsigned threads = 1);

/// Two-sided standard-normal quantile for `confidence` (0.99 -> 2.5758...).
double two_sided_normal_quantile(double confidence);

struct MadBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Median-absolute-deviation filter on one state's samples: keeps samples
/// with 0.6745 |x - median| / MAD <= z(confidence); when MAD == 0 only
/// samples equal to the median survive. Fewer than three samples fall back to
/// plain min/max.
MadBounds mad_bounds(std::span<const double> samples, double confidence = 0.99);

/// Adds MAD-refined bounds to `base`; `per_state_samples[s]` holds every
/// profiling probability of state s.
StateProfile mad_refine(const StateProfile& base,
                        const std::vector<std::vector<double>>& per_state_samples,
                        double confidence = 0.99);

/// Transposes profiling vectors into per-state sample lists.
std::vector<std::vector<double>> per_state_samples(std::span<const ProbVector> vectors);

/// Effective [LB, UB] for each state under `config`, clamped to [0, 1].
struct Boundaries {
  std::vector<double> lb;
  std::vector<double> ub;
};
Boundaries effective_boundaries(const StateProfile& profile,
                                const CoverageConfig& config);

struct CoverageDelta {
  bool new_cell = false;
  bool new_corner = false;
  bool new_top = false;

  bool any() const noexcept { return new_cell || new_corner || new_top; }
  bool increased(Criterion c) const noexcept;
};

struct CoverageReport {
  double ksc = 0.0;
  double scc = 0.0;
  double tsc = 0.0;
  std::size_t covered_cells = 0;
  std::size_t covered_corners = 0;
  std::size_t covered_top_states = 0;
  std::size_t num_states = 0;
  std::size_t k_cells = 0;
  std::size_t num_inputs = 0;

  double value(Criterion c) const noexcept;
  bool operator==(const CoverageReport&) const = default;
};

/// Incremental, monotone coverage state. Bits only ever flip from 0 to 1.
class CoverageTracker {
 public:
  CoverageTracker(const StateProfile& profile, const CoverageConfig& config);

  /// Which units `pv` would newly cover, without recording it.
  CoverageDelta probe(const ProbVector& pv) const;
  /// Records `pv` and returns the units it newly covered.
  CoverageDelta add_input(const ProbVector& pv);

  CoverageReport report() const;

  /// Bitwise OR of two trackers built on the same profile and config.
  void merge(const CoverageTracker& other);

  /// Cell index of probability `p` for state `s`; nullopt when p lies in a
  /// corner region.
  std::optional<std::size_t> cell_of(std::size_t s, double p) const;

  std::size_t num_states() const noexcept { return lb_.size(); }
  const CoverageConfig& config() const noexcept { return config_; }
  Boundaries boundaries() const { return {lb_, ub_}; }
  bool cell_covered(std::size_t s, std::size_t cell) const;
  bool lower_covered(std::size_t s) const { return lower_[s] != 0; }
  bool upper_covered(std::size_t s) const { return upper_[s] != 0; }
  bool top_covered(std::size_t s) const { return top_[s] != 0; }

  bool operator==(const CoverageTracker& o) const {
    return cells_ == o.cells_ && lower_ == o.lower_ && upper_ == o.upper_ &&
           top_ == o.top_ && num_inputs_ == o.num_inputs_;
  }

 private:
  // Self is const for probe() and non-const for add_input().
  template <typename Self>
  static CoverageDelta visit(Self& self, const ProbVector& pv);

  CoverageConfig config_;
  std::vector<double> lb_, ub_;
  std::vector<std::uint8_t> cells_;  // num_states * k_cells
  std::vector<std::uint8_t> lower_, upper_, top_;
  std::size_t num_inputs_ = 0;
};

/// Indices of the k largest entries, ties broken by ascending index.
std::vector<std::size_t> top_k_states(std::span<const double> probs, std::size_t k);

/// Coverage of a whole suite; input i is sampled with seed `seed + i` when
/// shots are set. Throws DimensionError on a profile/model qubit mismatch.
CoverageReport coverage_suite(const QnnModel& model, const LabeledDataset& suite,
                              const StateProfile& profile,
                              const CoverageConfig& config,
                              std::optional<std::uint64_t> shots = std::nullopt,
                              std::uint64_t seed = 0, unsigned threads = 1);

/// Coverage of precomputed probability vectors.
CoverageReport coverage_of_vectors(std::span<const ProbVector> vectors,
                                   const StateProfile& profile,
                                   const CoverageConfig& config);

std::string profile_to_json(const StateProfile& profile);
StateProfile profile_from_json(const std::string& text);
StateProfile load_profile(const std::filesystem::path& path);
void save_profile(const StateProfile& profile, const std::filesystem::path& path);

/// CSV with header `p0,...,p{n-1}`, one probability vector per row.
std::vector<ProbVector> prob_vectors_from_csv(const std::string& text,
                                              const std::string& source = "<memory>");
std::vector<ProbVector> read_prob_vectors_csv(const std::filesystem::path& path);

std::string report_to_json(const CoverageReport& report);
std::string report_to_csv(const CoverageReport& report);

}  // namespace qcov
