#include <doctest.h>

#include <cmath>

#include "qcov/attacks.hpp"
#include "qcov/coverage.hpp"
#include "qcov/error.hpp"
#include "toy.hpp"

using namespace qcov;

namespace {

bool in_unit_cube(std::span<const double> x) {
  for (double v : x)
    if (v < 0.0 || v > 1.0) return false;
  return true;
}

}  // namespace

TEST_CASE("attack names round-trip") {
  for (auto k : {AttackKind::Random, AttackKind::FGSM, AttackKind::JSMA})
    CHECK(attack_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(attack_kind_from_string("pgd"), ConfigError);
}

TEST_CASE("attacks stay in the unit cube and within budget") {
  const auto& toy = testing::toy_fixture();
  for (std::size_t i = 0; i < 20; ++i) {
    const auto x = toy.test.row(i);
    const int y = toy.test.label(i);
    const auto f = fgsm(toy.model, x, y, 0.25);
    const auto r = random_attack(toy.model, x, y, 0.25, i);
    const auto j = jsma(toy.model, x, y, 1.0, 0.5);
    CHECK(in_unit_cube(f.features));
    CHECK(in_unit_cube(r.features));
    CHECK(in_unit_cube(j.features));
    for (std::size_t k = 0; k < x.size(); ++k) {
      CHECK(std::abs(f.features[k] - x[k]) <= 0.25 + 1e-15);
      CHECK(std::abs(r.features[k] - x[k]) <= 0.25 + 1e-15);
    }
    CHECK(j.features_changed <= 2);
  }
}

TEST_CASE("zero budgets leave the input unchanged") {
  const auto& toy = testing::toy_fixture();
  const auto x = toy.test.row(0);
  const std::vector<double> xv(x.begin(), x.end());
  CHECK(fgsm(toy.model, x, toy.test.label(0), 0.0).features == xv);
  CHECK(random_attack(toy.model, x, toy.test.label(0), 0.0, 1).features == xv);
  const auto j = jsma(toy.model, x, toy.test.label(0), 1.0, 0.0);
  CHECK(j.features == xv);
  CHECK(j.features_changed == 0);
}

TEST_CASE("attacks are deterministic") {
  const auto& toy = testing::toy_fixture();
  for (auto kind : {AttackKind::Random, AttackKind::FGSM, AttackKind::JSMA}) {
    AttackConfig cfg;
    cfg.kind = kind;
    cfg.seed = 11;
    const auto a = attack_dataset(toy.model, toy.test, cfg);
    const auto b = attack_dataset(toy.model, toy.test, cfg, 3);
    CHECK(a.adversarial.digest() == b.adversarial.digest());
    CHECK(a.success == b.success);
  }
}

TEST_CASE("FGSM beats random noise of the same budget") {
  const auto& toy = testing::toy_fixture();
  AttackConfig cfg;
  cfg.epsilon = 0.25;
  cfg.kind = AttackKind::FGSM;
  const auto f = attack_dataset(toy.model, toy.test, cfg);
  cfg.kind = AttackKind::Random;
  const auto r = attack_dataset(toy.model, toy.test, cfg);
  CHECK(f.success_rate > r.success_rate);
  CHECK(f.adversarial.class_counts() == toy.test.class_counts());
}

TEST_CASE("JSMA touches fewer features than FGSM on successes") {
  const auto& toy = testing::toy_fixture();
  double l0_fgsm = 0, l0_jsma = 0;
  std::size_t nf = 0, nj = 0;
  for (std::size_t i = 0; i < toy.test.size(); ++i) {
    const auto x = toy.test.row(i);
    const auto f = fgsm(toy.model, x, toy.test.label(i), 0.25);
    const auto j = jsma(toy.model, x, toy.test.label(i), 1.0, 0.5);
    if (f.success) {
      l0_fgsm += static_cast<double>(f.features_changed);
      ++nf;
    }
    if (j.success) {
      l0_jsma += static_cast<double>(j.features_changed);
      ++nj;
    }
  }
  REQUIRE(nf > 0);
  REQUIRE(nj > 0);
  CHECK(l0_jsma / static_cast<double>(nj) < l0_fgsm / static_cast<double>(nf));
}

TEST_CASE("adding adversarial inputs never lowers coverage") {
  const auto& toy = testing::toy_fixture();
  AttackConfig cfg;
  cfg.epsilon = 0.25;
  const auto adv = attack_dataset(toy.model, toy.test, cfg);
  CoverageConfig cov;
  cov.k_cells = 100;
  cov.top_k = 2;
  const auto before = coverage_suite(toy.model, toy.test, toy.profile, cov);
  const auto after =
      coverage_suite(toy.model, toy.test.merged(adv.adversarial), toy.profile, cov);
  for (auto c : {Criterion::KSC, Criterion::SCC, Criterion::TSC})
    CHECK(after.value(c) >= before.value(c));
  CHECK(after.ksc > before.ksc);
}

TEST_CASE("attack config validation") {
  AttackConfig cfg;
  cfg.epsilon = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.gamma = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.theta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
