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

#include <cstdint>
#include <optional>
#include <vector>

#include "bellstrength/projection.hpp"
#include "bellstrength/proof.hpp"

namespace bellstrength {

enum class StrengthMode { kUniform, kUncorrelated, kCorrelated };

const char* to_string(StrengthMode mode);

struct GameOptions {
  double inner_tol = 1e-9;         // stationarity residual during the ascent
  double polish_inner_tol = 1e-12; // residual for final values and certificates
  double outer_gap_tol = 1e-9;     // target duality gap of the outer game
  int max_outer_iterations = 400;
  int multistarts = 33;            // uncorrelated: uniform start + 32 random
  std::uint64_t seed = 0xB311C0DEull;
  int threads = 0;                 // 0 = BELLSTRENGTH_THREADS or hardware
};

struct StrengthResult {
  StrengthMode mode = StrengthMode::kUniform;
  double strength_bits = 0.0;
  SettingDistribution sigma_star;
  std::vector<double> pi_star;
  double kkt_residual = 0.0;
  // |sup-inf - inf-sup| witnessed by the best dual theory found; present for
  // the correlated game, where the two orders agree.
  std::optional<double> crosscheck_gap;
  // Theory witnessing the gap: its worst-setting divergence upper-bounds the
  // game value. Empty unless the correlated game was solved.
  std::vector<double> dual_theory;
  bool converged = false;
  std::vector<ConditionalTable> best_classical;  // tables induced by pi_star
};

// Strength with every joint setting sampled equally: the inner projection at
// the uniform setting distribution.
StrengthResult strength_uniform(const NonlocalityProof& proof,
                                const GameOptions& options = {});

// Strength over all joint setting distributions: maximizes the concave inner
// value by conditional-gradient ascent along setting directions (supergradient
// component at setting s is the divergence of that setting's tables at the
// current projection), sharpened by an equalizing Newton step on the final
// support face. The reported gap compares against the best dual theory.
StrengthResult strength_correlated(const NonlocalityProof& proof,
                                   const GameOptions& options = {});

// Strength over product-form setting distributions (a non-convex domain):
// seeded multi-start cyclic ascent over the per-party marginal simplices,
// each line maximization by golden section on the concave restriction.
// Returns the best point found.
StrengthResult strength_uncorrelated(const NonlocalityProof& proof,
                                     const GameOptions& options = {});

struct MinimaxResult {
  double value_bits = 0.0;       // best certified value of min over theories
                                 // of the worst-setting divergence
  std::vector<double> pi_star;   // theory achieving it
  double gap = 0.0;              // |value - sup-inf| achieved
  bool converged = false;
  std::vector<double> per_setting_bits;  // divergences of pi_star
};

// The order-swapped game: the single local theory whose worst setting is
// least bad. For two-party, two-setting proofs the optimizing theory is an
// equalizer and the value coincides with the correlated strength; for other
// scenarios the values still agree and only the full-simplex game is solved.
MinimaxResult minimax_value(const NonlocalityProof& proof,
                            const GameOptions& options = {});

struct EqualizerReport {
  bool equalizer = false;
  std::vector<double> per_setting_bits;
  double spread = 0.0;  // max - min over settings
};

// A theory is an equalizer when it yields the same divergence at every joint
// setting.
EqualizerReport equalizer_check(const NonlocalityProof& proof,
                                const LocalTheory& pi, double tol = 1e-9);

struct SaddleReport {
  bool saddle = false;
  double kkt_residual = 0.0;
  double equalizer_spread = 0.0;
  double value_bits = 0.0;  // objective at the pair; the game value when saddle
};

// (sigma, pi) is a saddle of the uncorrelated game when pi attains the inner
// minimum at sigma and is an equalizer; the uncorrelated strength then equals
// the objective at the pair.
SaddleReport saddle_check(const NonlocalityProof& proof,
                          const SettingDistribution& sigma,
                          const LocalTheory& pi, double tol = 1e-8);

}  // namespace bellstrength
