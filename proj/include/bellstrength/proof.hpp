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

#include <string>
#include <vector>

#include "bellstrength/scenario.hpp"

namespace bellstrength {

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kNoSignallingTolerance = 1e-9;

// Conditional distribution of the joint outcome at one joint setting.
// `probs` is indexed by the scenario's outcome-tuple index for that setting.
struct ConditionalTable {
  std::vector<int> setting;
  std::vector<double> probs;
};

// A family of conditional outcome tables, one per joint setting, produced by
// some experiment. Construction validates completeness, normalization
// (entries renormalized exactly when within kProbabilityTolerance of 1), and
// the no-signalling property of the tables.
class NonlocalityProof {
 public:
  NonlocalityProof(Scenario scenario, std::vector<ConditionalTable> tables,
                   std::string name = "",
                   double no_signalling_tol = kNoSignallingTolerance);

  const Scenario& scenario() const { return scenario_; }
  const std::string& name() const { return name_; }
  const std::vector<ConditionalTable>& tables() const { return tables_; }

  // Table for a joint setting, addressed by canonical joint-setting index.
  const ConditionalTable& table(int joint_setting) const {
    return tables_[joint_setting];
  }
  double prob(int joint_setting, int outcome_index) const {
    return tables_[joint_setting].probs[outcome_index];
  }

 private:
  Scenario scenario_;
  std::vector<ConditionalTable> tables_;
  std::string name_;
};

// Mixture over deterministic theories: a probability vector indexed by the
// canonical deterministic-theory order. For the 2-party/2-setting/2-outcome
// scenario this is the familiar 16-vector.
class LocalTheory {
 public:
  LocalTheory(const Scenario& scenario, std::vector<double> weights);

  static LocalTheory uniform(const Scenario& scenario);
  static LocalTheory point_mass(const Scenario& scenario, std::int64_t vertex);

  const std::vector<double>& weights() const { return weights_; }
  std::int64_t size() const { return static_cast<std::int64_t>(weights_.size()); }

 private:
  std::vector<double> weights_;
};

// Distribution over joint settings chosen by the experimenter.
class SettingDistribution {
 public:
  enum class Form { kUniform, kProduct, kGeneral };

  // Empty placeholder; assign from one of the factories before use.
  SettingDistribution() = default;

  static SettingDistribution uniform(const Scenario& scenario);
  static SettingDistribution general(const Scenario& scenario,
                                     std::vector<double> probs);
  // Product of per-party marginals; `marginals[j]` has scenario.settings(j)
  // entries. The joint vector is their outer product.
  static SettingDistribution product(const Scenario& scenario,
                                     std::vector<std::vector<double>> marginals);

  Form form() const { return form_; }
  const std::vector<double>& probs() const { return probs_; }
  double prob(int joint_setting) const { return probs_[joint_setting]; }
  // Only meaningful for kProduct (and kUniform, where it is implied).
  const std::vector<std::vector<double>>& marginals() const {
    return marginals_;
  }

 private:
  SettingDistribution(Form form, std::vector<double> probs,
                      std::vector<std::vector<double>> marginals);

  Form form_ = Form::kGeneral;
  std::vector<double> probs_;
  std::vector<std::vector<double>> marginals_;
};

// Conditional table induced by a local theory at one joint setting: the total
// weight of deterministic theories consistent with each outcome tuple.
ConditionalTable induced_conditional(const Scenario& scenario,
                                     const LocalTheory& theory,
                                     const std::vector<int>& setting);
ConditionalTable induced_conditional(const Scenario& scenario,
                                     const LocalTheory& theory,
                                     int joint_setting);

// All induced tables at once (cheaper than per-setting calls).
std::vector<ConditionalTable> induced_tables(const Scenario& scenario,
                                             const LocalTheory& theory);

NonlocalityProof induced_proof(const Scenario& scenario,
                               const LocalTheory& theory,
                               std::string name = "");

struct NoSignallingReport {
  bool ok = true;
  double max_violation = 0.0;
  // Worst offender: party whose marginal shifts, its setting, and the two
  // joint settings that disagree.
  int party = -1;
  int party_setting = -1;
  int joint_setting_a = -1;
  int joint_setting_b = -1;
};

// Checks that each party's outcome marginal at each of its settings does not
// depend on the other parties' settings.
NoSignallingReport check_no_signalling(const Scenario& scenario,
                                       const std::vector<ConditionalTable>& tables,
                                       double tol = kNoSignallingTolerance);
NoSignallingReport check_no_signalling(const NonlocalityProof& proof,
                                       double tol = kNoSignallingTolerance);

// Validates a probability vector: entries >= -tol, sum within tol of 1.
// Returns an exactly renormalized copy (clipping negatives at 0).
std::vector<double> normalized_probabilities(std::vector<double> probs,
                                             double tol = kProbabilityTolerance,
                                             const char* what = "probability vector");

}  // namespace bellstrength
