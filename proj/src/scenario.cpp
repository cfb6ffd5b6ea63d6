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

#include "bellstrength/scenario.hpp"

#include <sstream>
#include <stdexcept>

namespace bellstrength {

Scenario::Scenario(int parties, std::vector<int> settings_per_party,
                   std::vector<std::vector<int>> outcomes_per_setting)
    : parties_(parties),
      settings_per_party_(std::move(settings_per_party)),
      outcomes_per_setting_(std::move(outcomes_per_setting)) {
  if (parties_ < 1) throw std::invalid_argument("scenario needs >= 1 party");
  if (static_cast<int>(settings_per_party_.size()) != parties_ ||
      static_cast<int>(outcomes_per_setting_.size()) != parties_) {
    throw std::invalid_argument("scenario: per-party lists have wrong length");
  }
  joint_setting_count_ = 1;
  pair_count_ = 0;
  pair_offset_.resize(parties_);
  for (int j = 0; j < parties_; ++j) {
    if (settings_per_party_[j] < 1) {
      throw std::invalid_argument("scenario: every party needs >= 1 setting");
    }
    if (static_cast<int>(outcomes_per_setting_[j].size()) !=
        settings_per_party_[j]) {
      throw std::invalid_argument(
          "scenario: outcome list length must match setting count");
    }
    for (int s = 0; s < settings_per_party_[j]; ++s) {
      if (outcomes_per_setting_[j][s] < 1) {
        throw std::invalid_argument("scenario: every setting needs >= 1 outcome");
      }
    }
    if (joint_setting_count_ > (1 << 28) / settings_per_party_[j]) {
      throw std::invalid_argument("scenario: joint setting count too large");
    }
    joint_setting_count_ *= settings_per_party_[j];
    pair_offset_[j] = pair_count_;
    pair_count_ += settings_per_party_[j];
  }
}

Scenario Scenario::symmetric(int parties, int settings, int outcomes) {
  std::vector<int> per_party(parties, settings);
  std::vector<std::vector<int>> outs(parties,
                                     std::vector<int>(settings, outcomes));
  return Scenario(parties, std::move(per_party), std::move(outs));
}

std::int64_t Scenario::deterministic_count() const {
  std::int64_t count = 1;
  for (int j = 0; j < parties_; ++j) {
    for (int s = 0; s < settings_per_party_[j]; ++s) {
      const int n = outcomes_per_setting_[j][s];
      if (count > deterministic_count_cap() / n) {
        throw std::overflow_error(
            "scenario too large: deterministic theory count exceeds cap 2^24");
      }
      count *= n;
    }
  }
  return count;
}

int Scenario::joint_setting_index(const std::vector<int>& setting) const {
  if (static_cast<int>(setting.size()) != parties_) {
    throw std::invalid_argument("joint setting has wrong arity");
  }
  int index = 0;
  for (int j = 0; j < parties_; ++j) {
    if (setting[j] < 0 || setting[j] >= settings_per_party_[j]) {
      throw std::invalid_argument("setting index out of range");
    }
    index = index * settings_per_party_[j] + setting[j];
  }
  return index;
}

std::vector<int> Scenario::joint_setting_tuple(int index) const {
  if (index < 0 || index >= joint_setting_count_) {
    throw std::invalid_argument("joint setting index out of range");
  }
  std::vector<int> setting(parties_);
  for (int j = parties_ - 1; j >= 0; --j) {
    setting[j] = index % settings_per_party_[j];
    index /= settings_per_party_[j];
  }
  return setting;
}

int Scenario::outcome_count(const std::vector<int>& setting) const {
  int count = 1;
  for (int j = 0; j < parties_; ++j) count *= outcomes(j, setting[j]);
  return count;
}

int Scenario::outcome_count(int joint_setting) const {
  return outcome_count(joint_setting_tuple(joint_setting));
}

int Scenario::outcome_index(const std::vector<int>& setting,
                            const std::vector<int>& outcomes_tuple) const {
  int index = 0;
  for (int j = 0; j < parties_; ++j) {
    const int n = outcomes(j, setting[j]);
    if (outcomes_tuple[j] < 0 || outcomes_tuple[j] >= n) {
      throw std::invalid_argument("outcome index out of range");
    }
    index = index * n + outcomes_tuple[j];
  }
  return index;
}

std::vector<int> Scenario::outcome_tuple(const std::vector<int>& setting,
                                         int index) const {
  std::vector<int> tuple(parties_);
  for (int j = parties_ - 1; j >= 0; --j) {
    const int n = outcomes(j, setting[j]);
    tuple[j] = index % n;
    index /= n;
  }
  return tuple;
}

bool Scenario::operator==(const Scenario& other) const {
  return parties_ == other.parties_ &&
         settings_per_party_ == other.settings_per_party_ &&
         outcomes_per_setting_ == other.outcomes_per_setting_;
}

std::string Scenario::describe() const {
  std::ostringstream out;
  out << parties_ << "x" << settings_per_party_[0] << "x"
      << outcomes_per_setting_[0][0];
  return out.str();
}

std::vector<DeterministicTheory> enumerate_deterministic(
    const Scenario& scenario) {
  const std::int64_t count = scenario.deterministic_count();
  std::vector<DeterministicTheory> theories;
  theories.reserve(static_cast<std::size_t>(count));
  // Flattened outcome-count table aligned with pair indices.
  std::vector<int> radix(scenario.pair_count());
  for (int j = 0; j < scenario.parties(); ++j) {
    for (int s = 0; s < scenario.settings(j); ++s) {
      radix[scenario.pair_index(j, s)] = scenario.outcomes(j, s);
    }
  }
  DeterministicTheory current;
  current.outcome.assign(scenario.pair_count(), 0);
  for (std::int64_t i = 0; i < count; ++i) {
    theories.push_back(current);
    // Odometer step, last pair fastest.
    for (int p = scenario.pair_count() - 1; p >= 0; --p) {
      if (++current.outcome[p] < radix[p]) break;
      current.outcome[p] = 0;
    }
  }
  return theories;
}

std::int64_t deterministic_index(const Scenario& scenario,
                                 const DeterministicTheory& theory) {
  if (static_cast<int>(theory.outcome.size()) != scenario.pair_count()) {
    throw std::invalid_argument("deterministic theory has wrong arity");
  }
  std::int64_t index = 0;
  for (int j = 0; j < scenario.parties(); ++j) {
    for (int s = 0; s < scenario.settings(j); ++s) {
      const int n = scenario.outcomes(j, s);
      const int o = theory.outcome[scenario.pair_index(j, s)];
      if (o < 0 || o >= n) {
        throw std::invalid_argument("deterministic theory outcome out of range");
      }
      index = index * n + o;
    }
  }
  return index;
}

DeterministicTheory deterministic_from_index(const Scenario& scenario,
                                             std::int64_t index) {
  DeterministicTheory theory;
  theory.outcome.assign(scenario.pair_count(), 0);
  for (int j = scenario.parties() - 1; j >= 0; --j) {
    for (int s = scenario.settings(j) - 1; s >= 0; --s) {
      const int n = scenario.outcomes(j, s);
      theory.outcome[scenario.pair_index(j, s)] = static_cast<int>(index % n);
      index /= n;
    }
  }
  return theory;
}

}  // namespace bellstrength
