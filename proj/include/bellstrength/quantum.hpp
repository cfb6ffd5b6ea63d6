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

#include <complex>
#include <string>
#include <vector>

#include "bellstrength/proof.hpp"

namespace bellstrength {

using Amplitude = std::complex<double>;

// Pure state of k qubits as computational-basis amplitudes (length 2^k).
class PureState {
 public:
  explicit PureState(std::vector<Amplitude> amplitudes);

  const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
  int qubits() const { return qubits_; }

 private:
  std::vector<Amplitude> amplitudes_;
  int qubits_;
};

// Two-outcome qubit measurement for one (party, setting): the vector whose
// projector fires outcome 1 ("true"). Outcome 0 projects on the orthogonal
// complement.
class MeasurementBasis {
 public:
  MeasurementBasis(int party, int setting, Amplitude true0, Amplitude true1);

  // cos(phi)|0> + sin(phi)|1>.
  static MeasurementBasis rotated(int party, int setting, double phi);

  int party() const { return party_; }
  int setting() const { return setting_; }
  // Basis vector for outcome o in {0, 1}.
  const std::vector<Amplitude>& vector(int outcome) const {
    return outcome ? true_ : false_;
  }

 private:
  int party_;
  int setting_;
  std::vector<Amplitude> true_;
  std::vector<Amplitude> false_;
};

// Born-rule outcome table at one joint setting: the squared overlap of the
// state with each tensor product of chosen basis vectors. `bases[j]` is the
// measurement party j performs; its `setting()` names the joint setting.
ConditionalTable born_table(const PureState& state,
                            const std::vector<MeasurementBasis>& bases,
                            const Scenario& scenario);

// Builds a complete proof from a state and one measurement per
// (party, setting); all parties measure qubits (2 outcomes each).
NonlocalityProof proof_from_state(
    const PureState& state,
    const std::vector<std::vector<MeasurementBasis>>& bases_per_party,
    std::string name);

// The six standard experiments. Accepted names: "bell", "bell-optimized",
// "chsh", "hardy", "mermin", "ghz". Throws on unknown names.
NonlocalityProof catalog(const std::string& name);
const std::vector<std::string>& catalog_names();

// Evaluation of the Bell-type inequality associated with a proof. Positive
// slack = quantum violation; any locally induced table family has slack <= 0.
struct ViolationReport {
  std::string inequality;  // human-readable rendering
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
};

// Picks the inequality by catalog name when recognized, else by scenario
// shape (2x2x2, 2x3x2, 3x2x2). Throws when no template fits.
ViolationReport violation_report(const NonlocalityProof& proof);

}  // namespace bellstrength
