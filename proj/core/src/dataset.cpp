#include "qcov/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "qcov/error.hpp"

namespace qcov {

void LabeledDataset::add(std::span<const double> features, int label) {
  if (labels_.empty() && num_features_ == 0) num_features_ = features.size();
  if (features.size() != num_features_) {
    throw DimensionError("row has " + std::to_string(features.size()) +
                         " features, dataset has " +
                         std::to_string(num_features_));
  }
  if (label < 0) throw ConfigError("negative class label");
  features_.insert(features_.end(), features.begin(), features.end());
  labels_.push_back(label);
}

int LabeledDataset::num_classes() const {
  if (labels_.empty()) return 0;
  return *std::max_element(labels_.begin(), labels_.end()) + 1;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes()), 0);
  for (int l : labels_) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out(num_features_);
  out.class_names = class_names;
  for (std::size_t i : indices) {
    if (i >= size()) throw DimensionError("subset index out of range");
    out.add(row(i), labels_[i]);
  }
  return out;
}

LabeledDataset LabeledDataset::filter_class(int label) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < size(); ++i)
    if (labels_[i] == label) idx.push_back(i);
  return subset(idx);
}

LabeledDataset LabeledDataset::merged(const LabeledDataset& other) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  if (other.num_features_ != num_features_) {
    throw DimensionError("cannot merge datasets with different feature counts");
  }
  LabeledDataset out = *this;
  out.features_.insert(out.features_.end(), other.features_.begin(),
                       other.features_.end());
  out.labels_.insert(out.labels_.end(), other.labels_.begin(),
                     other.labels_.end());
  return out;
}

LabeledDataset LabeledDataset::sample_per_class(std::size_t per_class,
                                                std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (int c = 0; c < num_classes(); ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < size(); ++i)
      if (labels_[i] == c) idx.push_back(i);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(per_class, idx.size()));
    std::sort(idx.begin(), idx.end());
    chosen.insert(chosen.end(), idx.begin(), idx.end());
  }
  return subset(chosen);
}

std::string LabeledDataset::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t d = num_features_;
  mix(&d, sizeof d);
  for (std::size_t i = 0; i < size(); ++i) {
    for (double f : row(i)) mix(&f, sizeof f);
    const std::int64_t l = labels_[i];
    mix(&l, sizeof l);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, const std::string& where) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(where + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

LabeledDataset dataset_from_csv(const std::string& text,
                                const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty file");
  const auto header = split_commas(trim(line));
  if (header.size() < 2 || trim(header.back()) != "label") {
    throw ParseError(source + ":1: header must be f0,...,f{d-1},label");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (trim(header[j]) != "f" + std::to_string(j)) {
      throw ParseError(source + ":1: column " + std::to_string(j) +
                       " must be named f" + std::to_string(j));
    }
  }
  LabeledDataset data(d);
  std::vector<double> row(d);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cells = split_commas(trim(line));
    if (cells.size() != d + 1) {
      throw ParseError(where + ": expected " + std::to_string(d + 1) +
                       " columns, got " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < d; ++j) row[j] = parse_double(cells[j], where);
    const double label = parse_double(cells[d], where);
    if (label < 0 || label != std::floor(label)) {
      throw ParseError(where + ": label must be a non-negative integer");
    }
    data.add(row, static_cast<int>(label));
  }
  return data;
}

LabeledDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return dataset_from_csv(ss.str(), path.string());
}

std::string dataset_to_csv(const LabeledDataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.num_features(); ++j) {
    out += "f" + std::to_string(j) + ",";
  }
  out += "label\n";
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double f : data.row(i)) {
      // Shortest representation that round-trips.
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, f);
      out.append(buf, ptr);
      out += ',';
    }
    out += std::to_string(data.label(i));
    out += '\n';
  }
  return out;
}

void write_dataset_csv(const LabeledDataset& data,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset '" + path.string() + "'");
  out << dataset_to_csv(data);
}

LabeledDataset make_blobs(int num_classes, std::size_t per_class,
                          std::size_t num_features, double separation,
                          double stddev, std::uint64_t seed) {
  if (num_classes < 1 || num_features < 1) {
    throw ConfigError("blobs need at least one class and one feature");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, stddev);
  LabeledDataset data(num_features);
  std::vector<double> x(num_features);
  const double pi = std::acos(-1.0);
  for (int c = 0; c < num_classes; ++c) {
    for (std::size_t n = 0; n < per_class; ++n) {
      for (std::size_t j = 0; j < num_features; ++j) {
        const double phase = 2.0 * pi * c / num_classes +
                             pi * static_cast<double>(j) /
                                 static_cast<double>(num_features);
        const double centre = 0.5 + separation * std::cos(phase);
        x[j] = std::clamp(centre + noise(rng), 0.0, 1.0);
      }
      data.add(x, c);
    }
  }
  return data;
}

namespace {

// 8x8 stroke templates, one per glyph class.
std::array<double, 64> glyph_template(int cls) {
  std::array<double, 64> img{};
  auto set = [&img](int r, int c) {
    if (r >= 0 && r < 8 && c >= 0 && c < 8) img[r * 8 + c] = 1.0;
  };
  switch (cls % 4) {
    case 0:  // vertical bar
      for (int r = 1; r < 7; ++r) { set(r, 3); set(r, 4); }
      break;
    case 1:  // horizontal bar
      for (int c = 1; c < 7; ++c) { set(3, c); set(4, c); }
      break;
    case 2:  // ring
      for (int k = 2; k < 6; ++k) { set(1, k); set(6, k); set(k, 1); set(k, 6); }
      break;
    default:  // diagonal
      for (int k = 0; k < 8; ++k) { set(k, k); }
      break;
  }
  return img;
}

}  // namespace

LabeledDataset make_glyphs(int num_classes, std::size_t per_class,
                           std::uint64_t seed) {
  if (num_classes < 1 || num_classes > 4) {
    throw ConfigError("glyph generator supports 1 to 4 classes");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> jitter(-1, 1);
  std::normal_distribution<double> noise(0.0, 0.08);
  LabeledDataset data(64);
  std::vector<double> x(64);
  for (int c = 0; c < num_classes; ++c) {
    const auto tmpl = glyph_template(c);
    for (std::size_t n = 0; n < per_class; ++n) {
      const int dr = jitter(rng);
      const int dc = jitter(rng);
      for (int r = 0; r < 8; ++r) {
        for (int col = 0; col < 8; ++col) {
          const int sr = r - dr;
          const int sc = col - dc;
          const double ink =
              (sr >= 0 && sr < 8 && sc >= 0 && sc < 8) ? tmpl[sr * 8 + sc] : 0.0;
          const double base = ink > 0.0 ? 0.85 : 0.05;
          x[r * 8 + col] = std::clamp(base + noise(rng), 0.0, 1.0);
        }
      }
      data.add(x, c);
    }
  }
  return data;
}

std::optional<LabeledDataset> builtin_dataset(const std::string& name) {
  const std::string prefix = "builtin:";
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string key = name.substr(prefix.size());
  if (key == "blobs2") return make_blobs(2, 200, 2, 0.25, 0.08, 11);
  if (key == "blobs3") return make_blobs(3, 200, 2, 0.25, 0.08, 13);
  if (key == "blobs2x4") return make_blobs(2, 200, 4, 0.2, 0.1, 17);
  if (key == "blobs3x4") return make_blobs(3, 200, 4, 0.2, 0.1, 19);
  if (key == "glyphs2") return make_glyphs(2, 200, 23);
  if (key == "glyphs3") return make_glyphs(3, 200, 29);
  throw ConfigError("unknown builtin dataset '" + key + "'");
}

}  // namespace qcov
