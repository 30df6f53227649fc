#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qcov/dataset.hpp"
#include "qcov/error.hpp"

using namespace qcov;

TEST_CASE("CSV round-trips values exactly") {
  LabeledDataset d(3);
  d.add(std::vector<double>{0.1, 1.0 / 3.0, 0.0}, 0);
  d.add(std::vector<double>{1.0, 2.5e-17, 0.7}, 2);
  const auto text = dataset_to_csv(d);
  CHECK(text.rfind("f0,f1,f2,label\n", 0) == 0);
  const auto back = dataset_from_csv(text);
  CHECK(back.size() == 2);
  CHECK(back.digest() == d.digest());
  CHECK(back.row(0)[1] == 1.0 / 3.0);

  const auto path = std::filesystem::temp_directory_path() / "qcov_test_data.csv";
  write_dataset_csv(d, path);
  CHECK(read_dataset_csv(path).digest() == d.digest());
  std::filesystem::remove(path);
}

TEST_CASE("CSV errors carry source and line") {
  auto expect = [](const std::string& text, const std::string& where) {
    try {
      dataset_from_csv(text, "mem");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(where) != std::string::npos);
    }
  };
  expect("", "mem");
  expect("a,b,label\n", "mem:1");
  expect("f0,f1,label\n0.1,0.2,0\n0.3,x,1\n", "mem:3");
  expect("f0,f1,label\n0.1,0.2\n", "mem:2");
  expect("f0,f1,label\n0.1,0.2,-1\n", "mem:2");
  CHECK_THROWS_AS(read_dataset_csv("/nonexistent/qcov.csv"), ConfigError);
}

TEST_CASE("digest is sensitive to features and labels") {
  LabeledDataset a(1), b(1), c(1);
  a.add(std::vector<double>{0.5}, 0);
  b.add(std::vector<double>{0.5}, 1);
  c.add(std::vector<double>{0.5000001}, 0);
  CHECK(a.digest() != b.digest());
  CHECK(a.digest() != c.digest());
  CHECK(a.digest().size() == 16);
}

TEST_CASE("per-class sampling caps at class size and is seeded") {
  const auto d = make_blobs(3, 20, 2, 0.2, 0.05, 1);
  const auto s = d.sample_per_class(5, 7);
  CHECK(s.class_counts() == std::vector<std::size_t>{5, 5, 5});
  CHECK(s.digest() == d.sample_per_class(5, 7).digest());
  CHECK(s.digest() != d.sample_per_class(5, 8).digest());
  CHECK(d.sample_per_class(100, 1).size() == 60);
}

TEST_CASE("subset, filter and merge") {
  const auto d = make_blobs(2, 10, 2, 0.2, 0.05, 1);
  CHECK(d.filter_class(1).size() == 10);
  CHECK(d.filter_class(0).merged(d.filter_class(1)).size() == 20);
  LabeledDataset wide(3);
  wide.add(std::vector<double>{0.1, 0.2, 0.3}, 0);
  CHECK_THROWS_AS(d.merged(wide), DimensionError);
  CHECK(d.merged(LabeledDataset(3)).size() == 20);
  const std::vector<std::size_t> idx{0, 19};
  const auto sub = d.subset(idx);
  CHECK(sub.label(0) == 0);
  CHECK(sub.label(1) == 1);
  LabeledDataset e(2);
  CHECK_THROWS_AS(e.add(std::vector<double>{0.1}, 0), DimensionError);
}

TEST_CASE("generators stay in the unit cube") {
  for (const char* name : {"builtin:blobs2", "builtin:blobs3", "builtin:blobs2x4",
                           "builtin:glyphs2", "builtin:glyphs3"}) {
    const auto d = builtin_dataset(name);
    REQUIRE(d.has_value());
    for (std::size_t i = 0; i < d->size(); ++i)
      for (double v : d->row(i)) CHECK((v >= 0.0 && v <= 1.0));
  }
  CHECK(builtin_dataset("builtin:glyphs2")->num_features() == 64);
  CHECK_FALSE(builtin_dataset("data.csv").has_value());
  CHECK_THROWS_AS(builtin_dataset("builtin:nope"), ConfigError);
}
