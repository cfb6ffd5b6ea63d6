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
#include <string>
#include <vector>

namespace bellstrength {

// Experiment shape: number of parties, measurement settings per party, and
// outcomes per (party, setting). Immutable after construction.
class Scenario {
 public:
  Scenario(int parties, std::vector<int> settings_per_party,
           std::vector<std::vector<int>> outcomes_per_setting);

  // Convenience constructor for the common symmetric case: every party has
  // `settings` settings and every setting has `outcomes` outcomes.
  static Scenario symmetric(int parties, int settings, int outcomes);

  int parties() const { return parties_; }
  int settings(int party) const { return settings_per_party_[party]; }
  const std::vector<int>& settings_per_party() const {
    return settings_per_party_;
  }
  int outcomes(int party, int setting) const {
    return outcomes_per_setting_[party][setting];
  }
  const std::vector<std::vector<int>>& outcomes_per_setting() const {
    return outcomes_per_setting_;
  }

  // Number of joint settings, Prod_j settings(j).
  int joint_setting_count() const { return joint_setting_count_; }

  // Number of deterministic outcome assignments, Prod_{j,s} outcomes(j,s).
  // Throws if the count exceeds `deterministic_count_cap()`.
  std::int64_t deterministic_count() const;

  // Joint settings are indexed in party-major order: the first party's
  // setting is the most significant digit, the last party's cycles fastest.
  int joint_setting_index(const std::vector<int>& setting) const;
  std::vector<int> joint_setting_tuple(int index) const;

  // Outcome tuples at a fixed joint setting use the same party-major order.
  int outcome_count(const std::vector<int>& setting) const;
  int outcome_count(int joint_setting) const;
  int outcome_index(const std::vector<int>& setting,
                    const std::vector<int>& outcomes) const;
  std::vector<int> outcome_tuple(const std::vector<int>& setting,
                                 int index) const;

  // Flat index over (party, setting) pairs, party-major then setting.
  int pair_count() const { return pair_count_; }
  int pair_index(int party, int setting) const {
    return pair_offset_[party] + setting;
  }

  bool operator==(const Scenario& other) const;
  bool operator!=(const Scenario& other) const { return !(*this == other); }

  std::string describe() const;  // e.g. "2x2x2"

  // Largest deterministic-theory count the library will enumerate. The
  // scenario shape itself is unrestricted; only vertex enumeration is capped.
  static std::int64_t deterministic_count_cap() { return std::int64_t{1} << 24; }

 private:
  int parties_;
  std::vector<int> settings_per_party_;
  std::vector<std::vector<int>> outcomes_per_setting_;
  int joint_setting_count_;
  int pair_count_;
  std::vector<int> pair_offset_;
};

// One deterministic local theory: an outcome for every (party, setting) pair.
struct DeterministicTheory {
  // outcome[scenario.pair_index(party, setting)] in [0, outcomes(party, s)).
  std::vector<int> outcome;
};

// All deterministic theories of the scenario in canonical order: odometer
// over (party, setting) pairs, the last pair cycling fastest. The order is
// stable across runs; optimality certificates and fixtures index into it.
std::vector<DeterministicTheory> enumerate_deterministic(
    const Scenario& scenario);

// Canonical index of one deterministic theory (inverse of enumeration order).
std::int64_t deterministic_index(const Scenario& scenario,
                                 const DeterministicTheory& theory);
DeterministicTheory deterministic_from_index(const Scenario& scenario,
                                             std::int64_t index);

}  // namespace bellstrength
