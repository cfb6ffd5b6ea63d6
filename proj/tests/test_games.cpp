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

#include "bellstrength/divergence.hpp"
#include "bellstrength/games.hpp"
#include "bellstrength/quantum.hpp"
#include "bellstrength/reference.hpp"
#include "test_support.hpp"

using namespace bellstrength;

namespace {

LocalTheory balanced_eight(const Scenario& sc) {
  std::vector<double> w(16, 0.0);
  for (int v : {0, 1, 4, 6, 9, 11, 14, 15}) w[v] = 1.0 / 8;
  return LocalTheory(sc, w);
}

}  // namespace

TEST_CASE("uniform strengths of the catalog") {
  CHECK(strength_uniform(catalog("bell")).strength_bits ==
        doctest::Approx(0.0141597409).epsilon(1e-8));
  CHECK(strength_uniform(catalog("ghz")).strength_bits ==
        doctest::Approx(0.2075187496).epsilon(1e-8));
  CHECK(strength_uniform(catalog("mermin")).strength_bits ==
        doctest::Approx(0.0157895843).epsilon(1e-7));
}

TEST_CASE("correlated strength of the chsh experiment stays at uniform") {
  const StrengthResult result = strength_correlated(catalog("chsh"));
  CHECK(result.converged);
  CHECK(result.strength_bits == doctest::Approx(0.0462738469).epsilon(1e-9));
  for (double p : result.sigma_star.probs()) {
    CHECK(p == doctest::Approx(0.25).epsilon(1e-6));
  }
  CHECK(*result.crosscheck_gap <= 1e-6);
}

TEST_CASE("correlated strength of the three-party experiment") {
  const NonlocalityProof ghz = catalog("ghz");
  const StrengthResult result = strength_correlated(ghz);
  const Scenario& sc = ghz.scenario();
  CHECK(result.strength_bits == doctest::Approx(0.4150374993).epsilon(1e-9));
  // Mass sits evenly on the four settings with an even number of
  // second-position measurements.
  for (int s = 0; s < sc.joint_setting_count(); ++s) {
    const std::vector<int> abc = sc.joint_setting_tuple(s);
    const double expected = testing::ghz_parity_setting(abc) ? 0.25 : 0.0;
    CHECK(result.sigma_star.prob(s) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("correlated strength of the original two-angle experiment") {
  const StrengthResult result = strength_correlated(catalog("bell"));
  const Scenario& sc = catalog("bell").scenario();
  CHECK(result.strength_bits == doctest::Approx(0.0169800305).epsilon(1e-8));
  CHECK(result.sigma_star.prob(sc.joint_setting_index({0, 0})) ==
        doctest::Approx(0.2836084841).epsilon(1e-4));
  CHECK(result.sigma_star.prob(sc.joint_setting_index({1, 0})) ==
        doctest::Approx(0.1020773549).epsilon(1e-4));
  CHECK(result.sigma_star.prob(sc.joint_setting_index({0, 1})) ==
        doctest::Approx(0.3307056768).epsilon(1e-4));
  CHECK(result.sigma_star.prob(sc.joint_setting_index({1, 1})) ==
        doctest::Approx(0.2836084841).epsilon(1e-4));
}

TEST_CASE("uncorrelated strengths and their optimizing marginals") {
  const StrengthResult chsh = strength_uncorrelated(catalog("chsh"));
  CHECK(chsh.strength_bits == doctest::Approx(0.0462738469).epsilon(1e-7));

  const StrengthResult opt = strength_uncorrelated(catalog("bell-optimized"));
  CHECK(opt.strength_bits == doctest::Approx(0.0191506613).epsilon(1e-6));
  for (const std::vector<double>& m : opt.sigma_star.marginals()) {
    const double lo = std::min(m[0], m[1]);
    CHECK(lo == doctest::Approx(0.3869208948).epsilon(1e-3));
  }
}

TEST_CASE("the three-setting experiment drops one setting per party") {
  const StrengthResult result = strength_uncorrelated(catalog("mermin"));
  CHECK(result.strength_bits == doctest::Approx(0.0191506613).epsilon(1e-6));
  // One setting of each party carries no mass; the remaining two match the
  // optimized two-setting marginals (several relabelings are optimal).
  for (const std::vector<double>& m : result.sigma_star.marginals()) {
    double lo = 1.0, mid = 1.0, hi = 0.0;
    for (double x : m) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    for (double x : m) {
      if (x != lo && x != hi) mid = x;
      if (lo == hi) mid = x;
    }
    CHECK(lo <= 1e-6);
    CHECK(hi == doctest::Approx(0.6130791052).epsilon(1e-3));
    CHECK(mid == doctest::Approx(0.3869208948).epsilon(1e-3));
  }
}

TEST_CASE("strength ordering holds for every catalog experiment") {
  for (const std::string& name : catalog_names()) {
    const NonlocalityProof proof = catalog(name);
    const double uni = strength_uniform(proof).strength_bits;
    const double unc = strength_uncorrelated(proof).strength_bits;
    const double cor = strength_correlated(proof).strength_bits;
    INFO(name);
    CHECK(uni <= unc + 1e-9);
    CHECK(unc <= cor + 1e-9);
  }
}

TEST_CASE("minimax value and the correlated strength coincide") {
  const MinimaxResult chsh = minimax_value(catalog("chsh"));
  CHECK(chsh.value_bits == doctest::Approx(0.0462738469).epsilon(1e-7));
  CHECK(chsh.gap <= 1e-6);

  const MinimaxResult bell = minimax_value(catalog("bell"));
  CHECK(bell.value_bits == doctest::Approx(0.0169800305).epsilon(1e-6));
  CHECK(bell.gap <= 1e-6);
}

TEST_CASE("minimax of an explainable experiment is zero") {
  SplitMix64 rng(61);
  const MinimaxResult result = minimax_value(
      testing::random_local_proof(rng, Scenario::symmetric(2, 2, 2)));
  CHECK(result.value_bits <= 1e-9);
}

TEST_CASE("any fixed theory bounds every projection value from above") {
  // Weak duality: the projection at any sigma never exceeds the worst
  // setting of any fixed theory.
  SplitMix64 rng(62);
  const NonlocalityProof proof = catalog("chsh");
  const MinimaxResult dual = minimax_value(proof);
  for (int rep = 0; rep < 20; ++rep) {
    const SettingDistribution sigma =
        testing::random_general_sigma(rng, proof.scenario());
    const double value = project(proof, sigma, 1e-9).value_bits;
    CHECK(value <= dual.value_bits + 1e-9);
  }
}

TEST_CASE("equalizer theories") {
  const NonlocalityProof chsh = catalog("chsh");
  const Scenario& sc = chsh.scenario();
  const EqualizerReport balanced = equalizer_check(chsh, balanced_eight(sc), 1e-9);
  CHECK(balanced.equalizer);
  CHECK(balanced.spread <= 1e-12);
  for (double v : balanced.per_setting_bits) {
    CHECK(v == doctest::Approx(0.0462738469).epsilon(1e-9));
  }

  // The uniform theory also equalizes this experiment (all four tables carry
  // the same entry multiset), but at a far worse level.
  const EqualizerReport uniform = equalizer_check(chsh, LocalTheory::uniform(sc), 1e-9);
  CHECK(uniform.equalizer);
  CHECK(uniform.per_setting_bits[0] > 0.39);

  // Breaking one weight breaks the equalization.
  std::vector<double> w(16, 1.0 / 16);
  w[0] = 3.0 / 16;
  w[5] = 0.0;
  w[10] = 0.0;
  w[15] = 3.0 / 16;
  const EqualizerReport skewed = equalizer_check(chsh, LocalTheory(sc, w), 1e-9);
  CHECK_FALSE(skewed.equalizer);
}

TEST_CASE("equalizers returned by the minimax game for two-setting proofs") {
  for (const char* name : {"bell", "bell-optimized", "chsh", "hardy"}) {
    const NonlocalityProof proof = catalog(name);
    const MinimaxResult dual = minimax_value(proof);
    const EqualizerReport eq =
        equalizer_check(proof, LocalTheory(proof.scenario(), dual.pi_star), 1e-6);
    INFO(name);
    CHECK(eq.equalizer);
  }
}

TEST_CASE("saddle verification for the chsh experiment") {
  const NonlocalityProof chsh = catalog("chsh");
  const Scenario& sc = chsh.scenario();
  const SettingDistribution uniform = SettingDistribution::uniform(sc);

  const SaddleReport good = saddle_check(chsh, uniform, balanced_eight(sc), 1e-8);
  CHECK(good.saddle);
  CHECK(good.value_bits == doctest::Approx(0.0462738469).epsilon(1e-9));

  // The uniform theory equalizes but does not attain the inner minimum.
  const SaddleReport bad =
      saddle_check(chsh, uniform, LocalTheory::uniform(sc), 1e-8);
  CHECK_FALSE(bad.saddle);
  CHECK(bad.kkt_residual > 0.1);
}

TEST_CASE("saddle of an explainable experiment is trivial") {
  SplitMix64 rng(63);
  const Scenario sc = Scenario::symmetric(2, 2, 2);
  const LocalTheory pi = testing::random_local_theory(rng, sc);
  const NonlocalityProof proof = induced_proof(sc, pi);
  const SaddleReport report =
      saddle_check(proof, SettingDistribution::uniform(sc), pi, 1e-8);
  CHECK(report.saddle);
  CHECK(report.value_bits <= 1e-12);
}

TEST_CASE("published strengths reproduce within table tolerances") {
  for (const ReferenceStrengths& row : reference_strength_table()) {
    const NonlocalityProof proof = catalog(row.name);
    INFO(row.name);
    CHECK(std::abs(strength_uniform(proof).strength_bits - row.uniform) <= 1e-7);
    CHECK(std::abs(strength_uncorrelated(proof).strength_bits - row.uncorrelated) <=
          1e-6);
    CHECK(std::abs(strength_correlated(proof).strength_bits - row.correlated) <=
          1e-7);
  }
}
