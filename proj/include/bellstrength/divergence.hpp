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

#include <vector>

#include "bellstrength/proof.hpp"

namespace bellstrength {

// All divergences in this library are in bits (log base 2). +infinity is a
// regular value: it arises whenever q puts mass where p has none.

// Kullback-Leibler divergence D(q||p) = sum_{z: q(z)>0} q(z) log2(q(z)/p(z)).
// Terms with q(z)=0 contribute nothing. Inputs must be equal-length
// probability vectors (sums within `norm_tol` of 1).
double kl_bits(const std::vector<double>& q, const std::vector<double>& p,
               double norm_tol = 1e-9);

// Same, without input validation; used by solvers on pre-validated data.
double kl_bits_unchecked(const std::vector<double>& q,
                         const std::vector<double>& p);

// Game objective: the setting-averaged divergence between the experiment's
// conditional tables and the ones the local theory induces,
//   U(sigma, pi) = sum_s sigma_s D(Q_s || P_{s;pi}).
// Equals the divergence between the full joint distributions over
// (setting, outcome), by the chain rule for KL divergence.
double objective_bits(const NonlocalityProof& proof,
                      const SettingDistribution& sigma,
                      const LocalTheory& theory);

// Same quantity evaluated against precomputed induced tables.
double objective_bits(const NonlocalityProof& proof,
                      const SettingDistribution& sigma,
                      const std::vector<ConditionalTable>& induced);

// Per-setting divergences D(Q_s || P_{s;pi}) for every joint setting.
std::vector<double> per_setting_divergences(
    const NonlocalityProof& proof, const std::vector<ConditionalTable>& induced);

// log2 of Peres' confidence depressing factor after n trials: n * strength.
double confidence_depressing_log2(double strength_bits, double n);

}  // namespace bellstrength
