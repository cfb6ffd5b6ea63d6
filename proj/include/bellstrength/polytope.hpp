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

// A family of conditional tables over a subset of the joint settings that
// satisfies the no-signalling restrictions on that subset. Every such family
// over three of the four settings of a two-party, two-setting scenario lies
// in the convex hull of the deterministic theories.
struct GammaTable {
  std::vector<int> settings;              // joint-setting indices, ascending
  std::vector<ConditionalTable> tables;   // aligned with `settings`
};

GammaTable gamma_from_proof(const NonlocalityProof& proof,
                            const std::vector<int>& settings);

// No-signalling check restricted to the settings present in the table.
NoSignallingReport check_gamma_no_signalling(const Scenario& scenario,
                                             const GammaTable& gamma,
                                             double tol = kNoSignallingTolerance);

struct GammaDecomposition {
  LocalTheory weights;
  double reconstruction_error = 0.0;  // max abs entry deviation after re-mixing
  int steps = 0;
};

// Constructive decomposition of a three-setting family into deterministic
// theories for two-party, two-setting scenarios: repeatedly peel off the
// deterministic theory compatible with the smallest remaining entry. Ties are
// broken by canonical vertex order. Throws when the input violates the
// no-signalling restrictions (then no decomposition exists).
GammaDecomposition decompose_gamma(const GammaTable& gamma,
                                   const Scenario& scenario);

// Local theory reproducing the proof's tables exactly on the three settings
// other than `excluded_setting` (joint-setting index).
LocalTheory perfect_lr_for_three_settings(const NonlocalityProof& proof,
                                          int excluded_setting);

struct PropernessReport {
  bool proper = false;
  double divergence_bits = 0.0;  // inner minimum at the uniform distribution
  std::vector<double> explaining_weights;  // nonempty when improper
};

// A proof is proper when no local theory reproduces all its tables; decided
// by the inner projection at the uniform setting distribution, whose value is
// positive exactly for proper proofs.
PropernessReport is_proper(const NonlocalityProof& proof, double tol = 1e-7);

}  // namespace bellstrength
