#include "qcov/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "qcov/error.hpp"
#include "qcov/parallel.hpp"

namespace qcov {

void StateProfile::validate() const {
  if (lower.size() != num_states || upper.size() != num_states ||
      sigma.size() != num_states) {
    throw DimensionError("profile arrays do not match num_states");
  }
  for (std::size_t s = 0; s < num_states; ++s) {
    if (!(0.0 <= lower[s] && lower[s] <= upper[s] && upper[s] <= 1.0)) {
      throw ConfigError("profile bounds of state " + std::to_string(s) +
                        " violate 0 <= l <= u <= 1");
    }
  }
  if (mad_lower.has_value() != mad_upper.has_value()) {
    throw ConfigError("profile has only one side of the MAD bounds");
  }
  if (has_mad()) {
    if (mad_lower->size() != num_states || mad_upper->size() != num_states) {
      throw DimensionError("MAD bounds do not match num_states");
    }
    for (std::size_t s = 0; s < num_states; ++s) {
      if (!(lower[s] <= (*mad_lower)[s] && (*mad_lower)[s] <= (*mad_upper)[s] &&
            (*mad_upper)[s] <= upper[s])) {
        throw ConfigError("MAD bounds of state " + std::to_string(s) +
                          " are not nested within the raw bounds");
      }
    }
  }
}

std::string to_string(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::Raw: return "raw";
    case BoundaryMode::Sigma: return "sigma";
    case BoundaryMode::Mad: return "mad";
  }
  return "?";
}

BoundaryMode boundary_mode_from_string(const std::string& s) {
  if (s == "raw") return BoundaryMode::Raw;
  if (s == "sigma") return BoundaryMode::Sigma;
  if (s == "mad") return BoundaryMode::Mad;
  throw ConfigError("unknown boundary mode '" + s + "' (expected raw|sigma|mad)");
}

void CoverageConfig::validate() const {
  if (k_cells < 1) throw ConfigError("k_cells must be >= 1");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (!(epsilon_degenerate >= 0.0)) throw ConfigError("epsilon must be >= 0");
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::KSC: return "ksc";
    case Criterion::SCC: return "scc";
    case Criterion::TSC: return "tsc";
  }
  return "?";
}

Criterion criterion_from_string(const std::string& s) {
  if (s == "ksc") return Criterion::KSC;
  if (s == "scc") return Criterion::SCC;
  if (s == "tsc") return Criterion::TSC;
  throw ConfigError("unknown criterion '" + s + "' (expected ksc|scc|tsc)");
}

std::vector<ProbVector> collect_probabilities(const QnnModel& model,
                                              const LabeledDataset& data,
                                              std::optional<std::uint64_t> shots,
                                              std::uint64_t seed,
                                              unsigned threads) {
  std::vector<ProbVector> out(data.size());
  parallel_for(data.size(), threads, [&](std::size_t i) {
    out[i] = forward(model, data.row(i), shots, seed + i).probs;
  });
  return out;
}

StateProfile profile_from_vectors(std::span<const ProbVector> vectors,
                                  std::string digest) {
  if (vectors.empty()) throw ConfigError("cannot profile an empty dataset");
  const std::size_t n = vectors.front().size();
  StateProfile p;
  p.num_states = n;
  p.lower.assign(n, INFINITY);
  p.upper.assign(n, -INFINITY);
  std::vector<double> sum(n, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != n) throw DimensionError("profiling vectors differ in length");
    for (std::size_t s = 0; s < n; ++s) {
      p.lower[s] = std::min(p.lower[s], v[s]);
      p.upper[s] = std::max(p.upper[s], v[s]);
      sum[s] += v[s];
    }
  }
  const double count = static_cast<double>(vectors.size());
  p.sigma.assign(n, 0.0);
  if (vectors.size() > 1) {
    for (std::size_t s = 0; s < n; ++s) {
      const double mean = sum[s] / count;
      double ss = 0.0;
      for (const auto& v : vectors) ss += (v[s] - mean) * (v[s] - mean);
      p.sigma[s] = std::sqrt(ss / (count - 1.0));
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    p.lower[s] = std::clamp(p.lower[s], 0.0, 1.0);
    p.upper[s] = std::clamp(p.upper[s], 0.0, 1.0);
  }
  p.num_samples = vectors.size();
  p.digest = std::move(digest);
  return p;
}

StateProfile profile(const QnnModel& model, const LabeledDataset& data,
                     std::optional<std::uint64_t> shots, std::uint64_t seed,
                     unsigned threads) {
  if (data.empty()) throw ConfigError("cannot profile an empty dataset");
  const auto vectors = collect_probabilities(model, data, shots, seed, threads);
  return profile_from_vectors(vectors, data.digest());
}

double two_sided_normal_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("confidence must lie in (0, 1)");
  }
  // Solve erfc(z / sqrt 2) = 1 - confidence by bisection.
  const double target = 1.0 - confidence;
  double lo = 0.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid / std::sqrt(2.0)) > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MadBounds mad_bounds(std::span<const double> samples, double confidence) {
  if (samples.empty()) throw ConfigError("MAD filter needs samples");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  if (samples.size() < 3) return {*mn, *mx};

  const double z = two_sided_normal_quantile(confidence);
  const std::vector<double> xs(samples.begin(), samples.end());
  const double med = median_of(xs);
  std::vector<double> dev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = std::abs(xs[i] - med);
  const double mad = median_of(dev);

  double lo = INFINITY, hi = -INFINITY;
  for (double x : xs) {
    const bool keep =
        mad == 0.0 ? x == med : 0.6745 * std::abs(x - med) / mad <= z;
    if (keep) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (lo > hi) return {med, med};
  return {lo, hi};
}

std::vector<std::vector<double>> per_state_samples(std::span<const ProbVector> vectors) {
  if (vectors.empty()) return {};
  std::vector<std::vector<double>> out(vectors.front().size());
  for (auto& col : out) col.reserve(vectors.size());
  for (const auto& v : vectors)
    for (std::size_t s = 0; s < out.size(); ++s) out[s].push_back(v[s]);
  return out;
}

StateProfile mad_refine(const StateProfile& base,
                        const std::vector<std::vector<double>>& samples,
                        double confidence) {
  if (samples.size() != base.num_states) {
    throw DimensionError("per-state samples do not match the profile");
  }
  StateProfile out = base;
  out.mad_lower = std::vector<double>(base.num_states);
  out.mad_upper = std::vector<double>(base.num_states);
  for (std::size_t s = 0; s < base.num_states; ++s) {
    const MadBounds b = mad_bounds(samples[s], confidence);
    // Clamp into the raw range: survivors are a subset of the samples that
    // defined l and u, so this only absorbs [0, 1] clamping of the raw bounds.
    (*out.mad_lower)[s] = std::clamp(b.lower, base.lower[s], base.upper[s]);
    (*out.mad_upper)[s] = std::clamp(b.upper, (*out.mad_lower)[s], base.upper[s]);
  }
  return out;
}

Boundaries effective_boundaries(const StateProfile& profile,
                                const CoverageConfig& config) {
  Boundaries b;
  const std::size_t n = profile.num_states;
  b.lb.resize(n);
  b.ub.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    switch (config.boundary_mode) {
      case BoundaryMode::Raw:
        b.lb[s] = profile.lower[s];
        b.ub[s] = profile.upper[s];
        break;
      case BoundaryMode::Sigma:
        b.lb[s] = profile.lower[s] - profile.sigma[s];
        b.ub[s] = profile.upper[s] + profile.sigma[s];
        break;
      case BoundaryMode::Mad:
        if (!profile.has_mad()) {
          throw ConfigError("boundary mode 'mad' needs a MAD-refined profile");
        }
        b.lb[s] = (*profile.mad_lower)[s];
        b.ub[s] = (*profile.mad_upper)[s];
        break;
    }
    b.lb[s] = std::clamp(b.lb[s], 0.0, 1.0);
    b.ub[s] = std::clamp(b.ub[s], b.lb[s], 1.0);
  }
  return b;
}

bool CoverageDelta::increased(Criterion c) const noexcept {
  switch (c) {
    case Criterion::KSC: return new_cell;
    case Criterion::SCC: return new_corner;
    case Criterion::TSC: return new_top;
  }
  return false;
}

double CoverageReport::value(Criterion c) const noexcept {
  switch (c) {
    case Criterion::KSC: return ksc;
    case Criterion::SCC: return scc;
    case Criterion::TSC: return tsc;
  }
  return 0.0;
}

std::vector<std::size_t> top_k_states(std::span<const double> probs, std::size_t k) {
  std::vector<std::size_t> idx(probs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k),
                    idx.end(), [&](std::size_t a, std::size_t b) {
                      if (probs[a] != probs[b]) return probs[a] > probs[b];
                      return a < b;
                    });
  idx.resize(k);
  return idx;
}

CoverageTracker::CoverageTracker(const StateProfile& profile,
                                 const CoverageConfig& config)
    : config_(config) {
  config_.validate();
  profile.validate();
  Boundaries b = effective_boundaries(profile, config_);
  lb_ = std::move(b.lb);
  ub_ = std::move(b.ub);
  const std::size_t n = lb_.size();
  cells_.assign(n * config_.k_cells, 0);
  lower_.assign(n, 0);
  upper_.assign(n, 0);
  top_.assign(n, 0);
}

std::optional<std::size_t> CoverageTracker::cell_of(std::size_t s, double p) const {
  const double lb = lb_[s];
  const double ub = ub_[s];
  const std::size_t k = config_.k_cells;
  if (ub - lb < config_.epsilon_degenerate) {
    if (std::abs(p - lb) <= config_.epsilon_degenerate) return 0;
    return std::nullopt;
  }
  if (p < lb || p > ub) return std::nullopt;
  const double width = (ub - lb) / static_cast<double>(k);
  auto edge = [&](std::size_t c) { return lb + static_cast<double>(c) * width; };
  std::size_t idx = std::min<std::size_t>(
      k - 1, static_cast<std::size_t>(std::floor((p - lb) / width)));
  // Cells are [edge(c), edge(c+1)) with the last one closed; snap the
  // division result onto the edges exactly as computed above.
  while (idx > 0 && p < edge(idx)) --idx;
  while (idx + 1 < k && p >= edge(idx + 1)) ++idx;
  return idx;
}

template <typename Self>
CoverageDelta CoverageTracker::visit(Self& self, const ProbVector& pv) {
  constexpr bool commit = !std::is_const_v<Self>;
  if (pv.size() != self.lb_.size()) {
    throw DimensionError("probability vector has " + std::to_string(pv.size()) +
                         " entries, profile has " + std::to_string(self.lb_.size()));
  }
  CoverageDelta d;
  auto touch = [](auto& bit, bool& flag) {
    if (!bit) {
      flag = true;
      if constexpr (commit) bit = 1;
    }
  };
  const std::size_t k = self.config_.k_cells;
  for (std::size_t s = 0; s < self.lb_.size(); ++s) {
    const double p = pv[s];
    if (const auto cell = self.cell_of(s, p)) {
      touch(self.cells_[s * k + *cell], d.new_cell);
    } else if (p < self.lb_[s]) {
      touch(self.lower_[s], d.new_corner);
    } else {
      touch(self.upper_[s], d.new_corner);
    }
  }
  for (std::size_t s : top_k_states(pv.probs, self.config_.top_k)) {
    touch(self.top_[s], d.new_top);
  }
  if constexpr (commit) ++self.num_inputs_;
  return d;
}

CoverageDelta CoverageTracker::probe(const ProbVector& pv) const {
  return visit(*this, pv);
}

CoverageDelta CoverageTracker::add_input(const ProbVector& pv) {
  return visit(*this, pv);
}

bool CoverageTracker::cell_covered(std::size_t s, std::size_t cell) const {
  return cells_[s * config_.k_cells + cell] != 0;
}

CoverageReport CoverageTracker::report() const {
  CoverageReport r;
  r.num_states = lb_.size();
  r.k_cells = config_.k_cells;
  r.num_inputs = num_inputs_;
  r.covered_cells = static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
  r.covered_corners =
      static_cast<std::size_t>(std::count(lower_.begin(), lower_.end(), 1) +
                               std::count(upper_.begin(), upper_.end(), 1));
  r.covered_top_states = static_cast<std::size_t>(std::count(top_.begin(), top_.end(), 1));
  if (r.num_states > 0) {
    const double n = static_cast<double>(r.num_states);
    r.ksc = 100.0 * static_cast<double>(r.covered_cells) /
            (static_cast<double>(r.k_cells) * n);
    r.scc = 100.0 * static_cast<double>(r.covered_corners) / (2.0 * n);
    r.tsc = 100.0 * static_cast<double>(r.covered_top_states) / n;
  }
  return r;
}

void CoverageTracker::merge(const CoverageTracker& other) {
  if (other.lb_ != lb_ || other.ub_ != ub_ || other.config_.k_cells != config_.k_cells ||
      other.config_.top_k != config_.top_k) {
    throw ConfigError("cannot merge trackers built on different profiles or configs");
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] |= other.cells_[i];
  for (std::size_t s = 0; s < lb_.size(); ++s) {
    lower_[s] |= other.lower_[s];
    upper_[s] |= other.upper_[s];
    top_[s] |= other.top_[s];
  }
  num_inputs_ += other.num_inputs_;
}

CoverageReport coverage_of_vectors(std::span<const ProbVector> vectors,
                                   const StateProfile& profile,
                                   const CoverageConfig& config) {
  CoverageTracker tracker(profile, config);
  for (const auto& v : vectors) tracker.add_input(v);
  return tracker.report();
}

CoverageReport coverage_suite(const QnnModel& model, const LabeledDataset& suite,
                              const StateProfile& profile,
                              const CoverageConfig& config,
                              std::optional<std::uint64_t> shots,
                              std::uint64_t seed, unsigned threads) {
  if (profile.num_states != (std::size_t{1} << model.num_qubits)) {
    throw DimensionError("profile covers " + std::to_string(profile.num_states) +
                         " states but the model has 2^" +
                         std::to_string(model.num_qubits));
  }
  const auto vectors = collect_probabilities(model, suite, shots, seed, threads);
  return coverage_of_vectors(vectors, profile, config);
}

}  // namespace qcov
