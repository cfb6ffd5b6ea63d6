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

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "bellstrength/divergence.hpp"
#include "bellstrength/proof.hpp"
#include "bellstrength/quantum.hpp"
#include "bellstrength/rng.hpp"

namespace bellstrength::testing {

inline std::vector<double> random_simplex(SplitMix64& rng, int n) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.next_double());
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

inline LocalTheory random_local_theory(SplitMix64& rng, const Scenario& sc) {
  return LocalTheory(sc, random_simplex(rng, static_cast<int>(sc.deterministic_count())));
}

inline SettingDistribution random_product_sigma(SplitMix64& rng,
                                                const Scenario& sc) {
  std::vector<std::vector<double>> marginals(sc.parties());
  for (int j = 0; j < sc.parties(); ++j) {
    marginals[j] = random_simplex(rng, sc.settings(j));
  }
  return SettingDistribution::product(sc, std::move(marginals));
}

inline SettingDistribution random_general_sigma(SplitMix64& rng,
                                                const Scenario& sc) {
  return SettingDistribution::general(sc,
                                      random_simplex(rng, sc.joint_setting_count()));
}

// Random pure two-qubit experiment; no-signalling by construction and proper
// with high probability.
inline NonlocalityProof random_quantum_proof_2x2x2(SplitMix64& rng) {
  auto gaussian = [&rng]() {
    const double u1 = 1.0 - rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  };
  std::vector<Amplitude> amps(4);
  double norm2 = 0.0;
  for (Amplitude& a : amps) {
    a = Amplitude(gaussian(), gaussian());
    norm2 += std::norm(a);
  }
  for (Amplitude& a : amps) a /= std::sqrt(norm2);
  PureState state(std::move(amps));

  std::vector<std::vector<MeasurementBasis>> bases(2);
  for (int party = 0; party < 2; ++party) {
    for (int setting = 0; setting < 2; ++setting) {
      bases[party].push_back(MeasurementBasis::rotated(
          party, setting, rng.next_double() * std::numbers::pi));
    }
  }
  return proof_from_state(state, bases, "random-quantum");
}

// Random experiment that a local theory explains exactly (improper by
// construction).
inline NonlocalityProof random_local_proof(SplitMix64& rng, const Scenario& sc) {
  return induced_proof(sc, random_local_theory(rng, sc), "random-local");
}

// Derivative-free reference minimizer of the inner problem: pairwise mass
// exchanges on a simplex lattice starting at resolution 1/60, halving the
// step whenever no exchange improves, down to 1e-7. Independent of the
// production solver; costs only objective evaluations.
inline double oracle_inner_minimum(const NonlocalityProof& proof,
                                   const SettingDistribution& sigma) {
  const Scenario& sc = proof.scenario();
  const int n = static_cast<int>(sc.deterministic_count());
  std::vector<double> weights(n, 1.0 / n);
  auto value_of = [&](const std::vector<double>& w) {
    return objective_bits(proof, sigma, LocalTheory(sc, w));
  };
  double best = value_of(weights);
  double step = 1.0 / 60.0;
  while (step > 1e-7) {
    bool improved = false;
    for (int from = 0; from < n; ++from) {
      if (weights[from] < step) continue;
      for (int to = 0; to < n; ++to) {
        if (to == from) continue;
        weights[from] -= step;
        weights[to] += step;
        const double candidate = value_of(weights);
        if (candidate < best - 1e-15) {
          best = candidate;
          improved = true;
        } else {
          weights[from] += step;
          weights[to] -= step;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

// --- published reference tables ---
// Conditional outcome blocks are written [tt, ft, tf, ff] for two-party
// tables (rows are the second party's outcome in printed sources).

struct Block2 {
  int a, b;  // 0-based settings
  double tt, ft, tf, ff;
};

inline void check_block(const std::vector<ConditionalTable>& tables,
                        const Scenario& sc, const Block2& block, double tol,
                        bool* ok, double* worst) {
  const int s = sc.joint_setting_index({block.a, block.b});
  const auto at = [&](int x, int y) {
    return tables[s].probs[sc.outcome_index({block.a, block.b}, {x, y})];
  };
  const double expected[4] = {block.tt, block.ft, block.tf, block.ff};
  const double actual[4] = {at(1, 1), at(0, 1), at(1, 0), at(0, 0)};
  for (int i = 0; i < 4; ++i) {
    const double dev = std::abs(actual[i] - expected[i]);
    if (worst != nullptr && dev > *worst) *worst = dev;
    if (dev > tol && ok != nullptr) *ok = false;
  }
}

inline double max_block_deviation(const std::vector<ConditionalTable>& tables,
                                  const Scenario& sc,
                                  const std::vector<Block2>& blocks) {
  double worst = 0.0;
  for (const Block2& block : blocks) {
    check_block(tables, sc, block, 1e300, nullptr, &worst);
  }
  return worst;
}

inline const std::vector<Block2>& bell_quantum_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.4267766953, 0.0732233047, 0.0732233047, 0.4267766953},
      {1, 0, 0.5, 0.0, 0.0, 0.5},
      {0, 1, 0.25, 0.25, 0.25, 0.25},
      {1, 1, 0.4267766953, 0.0732233047, 0.0732233047, 0.4267766953}};
  return blocks;
}

inline const std::vector<Block2>& bell_optimized_quantum_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.5, 0.0, 0.0, 0.5},
      {1, 0, 0.375, 0.125, 0.125, 0.375},
      {0, 1, 0.125, 0.375, 0.375, 0.125},
      {1, 1, 0.375, 0.125, 0.125, 0.375}};
  return blocks;
}

inline const std::vector<Block2>& chsh_quantum_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.4267766953, 0.0732233047, 0.0732233047, 0.4267766953},
      {1, 0, 0.4267766953, 0.0732233047, 0.0732233047, 0.4267766953},
      {0, 1, 0.4267766953, 0.0732233047, 0.0732233047, 0.4267766953},
      {1, 1, 0.0732233047, 0.4267766953, 0.4267766953, 0.0732233047}};
  return blocks;
}

inline const std::vector<Block2>& hardy_quantum_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.0, 0.38196601125, 0.38196601125, 0.23606797750},
      {1, 0, 0.23606797750, 0.14589803375, 0.0, 0.61803398875},
      {0, 1, 0.23606797750, 0.0, 0.14589803375, 0.61803398875},
      {1, 1, 0.09016994375, 0.14589803375, 0.14589803375, 0.61803398875}};
  return blocks;
}

inline const std::vector<Block2>& mermin_quantum_blocks() {
  static std::vector<Block2> blocks;
  if (blocks.empty()) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a == b) {
          blocks.push_back({a, b, 0.5, 0.0, 0.0, 0.5});
        } else {
          blocks.push_back({a, b, 0.125, 0.375, 0.375, 0.125});
        }
      }
    }
  }
  return blocks;
}

inline const std::vector<Block2>& chsh_best_classical_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.375, 0.125, 0.125, 0.375},
      {1, 0, 0.375, 0.125, 0.125, 0.375},
      {0, 1, 0.375, 0.125, 0.125, 0.375},
      {1, 1, 0.125, 0.375, 0.375, 0.125}};
  return blocks;
}

inline const std::vector<Block2>& bell_best_classical_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.3970311357, 0.1029688643, 0.1029688643, 0.3970311357},
      {1, 0, 0.5, 0.0, 0.0, 0.5},
      {0, 1, 0.2940622714, 0.2059377286, 0.2059377286, 0.2940622714},
      {1, 1, 0.3970311357, 0.1029688643, 0.1029688643, 0.3970311357}};
  return blocks;
}

inline const std::vector<Block2>& bell_optimized_best_classical_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.5, 0.0, 0.0, 0.5},
      {1, 0, 0.3333333333, 0.1666666667, 0.1666666667, 0.3333333333},
      {0, 1, 0.1666666667, 0.3333333333, 0.3333333333, 0.1666666667},
      {1, 1, 0.3333333333, 0.1666666667, 0.1666666667, 0.3333333333}};
  return blocks;
}

inline const std::vector<Block2>& hardy_best_classical_blocks() {
  static const std::vector<Block2> blocks = {
      {0, 0, 0.0338829434, 0.3543640363, 0.3543640363, 0.2573889840},
      {1, 0, 0.2190090188, 0.1692379609, 0.0075052045, 0.6042478158},
      {0, 1, 0.2190090188, 0.0075052045, 0.1692379609, 0.6042478158},
      {1, 1, 0.0488933524, 0.1776208709, 0.1776208709, 0.5958649058}};
  return blocks;
}

inline const std::vector<Block2>& mermin_best_classical_blocks() {
  static std::vector<Block2> blocks;
  if (blocks.empty()) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a == b) {
          blocks.push_back({a, b, 0.5, 0.0, 0.0, 0.5});
        } else {
          blocks.push_back({a, b, 0.16667, 0.33333, 0.33333, 0.16667});
        }
      }
    }
  }
  return blocks;
}

// GHZ tables: settings with an even number of second-position measurements
// concentrate on one outcome parity; the rest are flat.
inline bool ghz_parity_setting(const std::vector<int>& abc) {
  return (abc[0] + abc[1] + abc[2]) % 2 == 0;
}

// Whether the cell carries weight at a parity setting. At (1,1,1) the
// support is the odd number-of-true cells; at the other parity settings the
// even ones.
inline bool ghz_support_cell(const std::vector<int>& abc,
                             const std::vector<int>& xyz) {
  const bool odd_trues = (xyz[0] + xyz[1] + xyz[2]) % 2 == 1;
  const bool all_first = abc[0] == 0 && abc[1] == 0 && abc[2] == 0;
  return all_first ? odd_trues : !odd_trues;
}

inline double ghz_quantum_deviation(const std::vector<ConditionalTable>& tables,
                                    const Scenario& sc) {
  double worst = 0.0;
  for (int s = 0; s < sc.joint_setting_count(); ++s) {
    const std::vector<int> abc = sc.joint_setting_tuple(s);
    for (int z = 0; z < static_cast<int>(tables[s].probs.size()); ++z) {
      const std::vector<int> xyz = sc.outcome_tuple(abc, z);
      double expected = 0.125;
      if (ghz_parity_setting(abc)) {
        expected = ghz_support_cell(abc, xyz) ? 0.25 : 0.0;
      }
      worst = std::max(worst, std::abs(tables[s].probs[z] - expected));
    }
  }
  return worst;
}

inline double ghz_best_classical_deviation(
    const std::vector<ConditionalTable>& tables, const Scenario& sc) {
  double worst = 0.0;
  for (int s = 0; s < sc.joint_setting_count(); ++s) {
    const std::vector<int> abc = sc.joint_setting_tuple(s);
    for (int z = 0; z < static_cast<int>(tables[s].probs.size()); ++z) {
      const std::vector<int> xyz = sc.outcome_tuple(abc, z);
      double expected = 0.125;
      if (ghz_parity_setting(abc)) {
        expected = ghz_support_cell(abc, xyz) ? 0.1875 : 0.0625;
      }
      worst = std::max(worst, std::abs(tables[s].probs[z] - expected));
    }
  }
  return worst;
}

}  // namespace bellstrength::testing
