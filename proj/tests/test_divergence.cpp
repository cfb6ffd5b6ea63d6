// Copyright 2026 The bellstrength Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <limits>

#include "bellstrength/divergence.hpp"
#include "bellstrength/quantum.hpp"
#include "test_support.hpp"

using namespace bellstrength;

TEST_CASE("divergence of a certain outcome against a near-certain one") {
  // One observed symbol, modeled at probability 0.99.
  CHECK(kl_bits({1.0, 0.0}, {0.99, 0.01}) ==
        doctest::Approx(-std::log2(0.99)).epsilon(1e-14));
  // About 0.0145 bits per trial.
  CHECK(kl_bits({1.0, 0.0}, {0.99, 0.01}) == doctest::Approx(0.0145).epsilon(1e-2));
}

TEST_CASE("divergence vanishes only at equality") {
  SplitMix64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const std::vector<double> q = testing::random_simplex(rng, 5);
    CHECK(kl_bits(q, q) == 0.0);
    const std::vector<double> p = testing::random_simplex(rng, 5);
    CHECK(kl_bits(q, p) >= 0.0);
    double distance = 0.0;
    for (int i = 0; i < 5; ++i) distance += std::abs(q[i] - p[i]);
    if (distance > 1e-3) CHECK(kl_bits(q, p) > 0.0);
  }
}

TEST_CASE("near-fair coins differ by about 0.000289 bits") {
  const double expected = 0.5 * std::log2(0.5 / 0.49) + 0.5 * std::log2(0.5 / 0.51);
  CHECK(expected == doctest::Approx(0.000289).epsilon(2e-3));
  CHECK(kl_bits({0.5, 0.5}, {0.49, 0.51}) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("asymmetry: the reverse direction can be infinite") {
  CHECK(std::isinf(kl_bits({0.99, 0.01}, {1.0, 0.0})));
  CHECK(std::isfinite(kl_bits({1.0, 0.0}, {0.99, 0.01})));
}

TEST_CASE("divergence input validation") {
  CHECK_THROWS_AS(kl_bits({1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(kl_bits({0.7, 0.7}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("objective at the balanced eight-vertex theory reproduces the known value") {
  const NonlocalityProof chsh = catalog("chsh");
  const Scenario& sc = chsh.scenario();
  std::vector<double> w(16, 0.0);
  for (int v : {0, 1, 4, 6, 9, 11, 14, 15}) w[v] = 1.0 / 8;
  const double value = objective_bits(
      chsh, SettingDistribution::uniform(sc), LocalTheory(sc, w));
  // Closed form: both distributions share one entry multiset per setting.
  const double q_hi = 0.25 + std::sqrt(2.0) / 8;
  const double q_lo = 0.25 - std::sqrt(2.0) / 8;
  const double direct =
      2 * q_hi * std::log2(q_hi / 0.375) + 2 * q_lo * std::log2(q_lo / 0.125);
  CHECK(value == doctest::Approx(direct).epsilon(1e-13));
  CHECK(value == doctest::Approx(0.0462738469).epsilon(1e-9));
}

TEST_CASE("objective is zero when the theory reproduces the experiment") {
  SplitMix64 rng(22);
  const Scenario sc = Scenario::symmetric(2, 2, 2);
  const LocalTheory pi = testing::random_local_theory(rng, sc);
  const NonlocalityProof proof = induced_proof(sc, pi);
  const double value =
      objective_bits(proof, testing::random_general_sigma(rng, sc), pi);
  CHECK(value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("objective equals the divergence of the full joint distributions") {
  // Chain rule: the setting-average of conditional divergences equals the
  // joint divergence over (setting, outcome) when the setting factors agree.
  SplitMix64 rng(23);
  auto joint_kl = [](const NonlocalityProof& proof,
                     const SettingDistribution& sigma, const LocalTheory& pi) {
    const auto induced = induced_tables(proof.scenario(), pi);
    std::vector<double> joint_q, joint_p;
    for (int s = 0; s < proof.scenario().joint_setting_count(); ++s) {
      for (std::size_t z = 0; z < proof.table(s).probs.size(); ++z) {
        joint_q.push_back(sigma.prob(s) * proof.table(s).probs[z]);
        joint_p.push_back(sigma.prob(s) * induced[s].probs[z]);
      }
    }
    return kl_bits(joint_q, joint_p);
  };

  for (const std::string& name : catalog_names()) {
    const NonlocalityProof proof = catalog(name);
    const SettingDistribution sigma =
        SettingDistribution::uniform(proof.scenario());
    const LocalTheory pi = testing::random_local_theory(rng, proof.scenario());
    CHECK(std::abs(objective_bits(proof, sigma, pi) - joint_kl(proof, sigma, pi)) <=
          1e-12);
  }
  const NonlocalityProof chsh = catalog("chsh");
  for (int rep = 0; rep < 100; ++rep) {
    const SettingDistribution sigma =
        testing::random_general_sigma(rng, chsh.scenario());
    const LocalTheory pi = testing::random_local_theory(rng, chsh.scenario());
    CHECK(std::abs(objective_bits(chsh, sigma, pi) - joint_kl(chsh, sigma, pi)) <=
          1e-12);
  }
}

TEST_CASE("objective is convex in the local theory") {
  SplitMix64 rng(24);
  const NonlocalityProof proof = catalog("chsh");
  const Scenario& sc = proof.scenario();
  for (int rep = 0; rep < 60; ++rep) {
    const LocalTheory pi1 = testing::random_local_theory(rng, sc);
    const LocalTheory pi2 = testing::random_local_theory(rng, sc);
    const SettingDistribution sigma = testing::random_general_sigma(rng, sc);
    const double lambda = rng.next_double();
    std::vector<double> mix(pi1.weights().size());
    for (std::size_t v = 0; v < mix.size(); ++v) {
      mix[v] = lambda * pi1.weights()[v] + (1 - lambda) * pi2.weights()[v];
    }
    const double mixed = objective_bits(proof, sigma, LocalTheory(sc, mix));
    const double bound = lambda * objective_bits(proof, sigma, pi1) +
                         (1 - lambda) * objective_bits(proof, sigma, pi2);
    CHECK(mixed <= bound + 1e-12);
  }
}

TEST_CASE("confidence depressing factor") {
  CHECK(confidence_depressing_log2(0.4150374993, 1) ==
        doctest::Approx(-std::log2(0.75)).epsilon(1e-9));
  CHECK(confidence_depressing_log2(0.123, 0) == 0.0);
  CHECK(confidence_depressing_log2(0.0191506613, 1e6) ==
        doctest::Approx(19150.6613).epsilon(1e-9));
  CHECK_THROWS_AS(confidence_depressing_log2(-0.1, 1), std::invalid_argument);
}
