#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qcov {

/// Row-major feature matrix with integer class labels. Features are expected
/// to lie in [0, 1].
class LabeledDataset {
 public:
  LabeledDataset() = default;
  explicit LabeledDataset(std::size_t num_features) : num_features_(num_features) {}

  void add(std::span<const double> features, int label);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t num_features() const noexcept { return num_features_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * num_features_, num_features_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// max label + 1 (0 for an empty set).
  int num_classes() const;
  std::vector<std::size_t> class_counts() const;

  LabeledDataset subset(std::span<const std::size_t> indices) const;
  LabeledDataset filter_class(int label) const;
  /// Concatenation; feature counts must match.
  LabeledDataset merged(const LabeledDataset& other) const;

  /// Up to `per_class` rows of every class, drawn without replacement.
  LabeledDataset sample_per_class(std::size_t per_class,
                                  std::uint64_t seed) const;

  /// 64-bit FNV-1a digest over features and labels, as 16 hex digits.
  std::string digest() const;

  std::vector<std::string> class_names;

 private:
  std::size_t num_features_ = 0;
  std::vector<double> features_;
  std::vector<int> labels_;
};

/// CSV with header `f0,...,f{d-1},label`.
LabeledDataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const LabeledDataset& data,
                       const std::filesystem::path& path);
std::string dataset_to_csv(const LabeledDataset& data);
LabeledDataset dataset_from_csv(const std::string& text,
                                const std::string& source = "<memory>");

/// Isotropic Gaussian blobs clipped to [0, 1]. Class c is centred at
/// 0.5 + separation * cos(2 pi c / K + pi j / d) in coordinate j.
LabeledDataset make_blobs(int num_classes, std::size_t per_class,
                          std::size_t num_features, double separation,
                          double stddev, std::uint64_t seed);

/// 8x8 images of bar-and-ring glyphs (one glyph per class) with pixel noise
/// and random one-pixel jitter; 64 features in [0, 1].
LabeledDataset make_glyphs(int num_classes, std::size_t per_class,
                           std::uint64_t seed);

/// Resolves "builtin:<name>" datasets (blobs2, blobs3, blobs2x4, glyphs2,
/// glyphs3); returns nullopt for any other string.
std::optional<LabeledDataset> builtin_dataset(const std::string& name);

}  // namespace qcov
