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

#include "bellstrength/proof.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellstrength {

std::vector<double> normalized_probabilities(std::vector<double> probs,
                                             double tol, const char* what) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= -tol) || !std::isfinite(p)) {
      throw std::invalid_argument(std::string(what) + ": negative entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw std::invalid_argument(std::string(what) + ": entries sum to " +
                                std::to_string(sum) + ", expected 1");
  }
  for (double& p : probs) p = std::max(p, 0.0) / sum;
  return probs;
}

NonlocalityProof::NonlocalityProof(Scenario scenario,
                                   std::vector<ConditionalTable> tables,
                                   std::string name, double no_signalling_tol)
    : scenario_(std::move(scenario)), name_(std::move(name)) {
  const int n_settings = scenario_.joint_setting_count();
  if (static_cast<int>(tables.size()) != n_settings) {
    throw std::invalid_argument("proof needs exactly one table per joint setting");
  }
  tables_.resize(n_settings);
  std::vector<bool> seen(n_settings, false);
  for (auto& table : tables) {
    const int index = scenario_.joint_setting_index(table.setting);
    if (seen[index]) {
      throw std::invalid_argument("duplicate table for a joint setting");
    }
    seen[index] = true;
    const int n_outcomes = scenario_.outcome_count(table.setting);
    if (static_cast<int>(table.probs.size()) != n_outcomes) {
      throw std::invalid_argument("conditional table has wrong outcome count");
    }
    table.probs = normalized_probabilities(std::move(table.probs),
                                           kProbabilityTolerance,
                                           "conditional table");
    tables_[index] = std::move(table);
    tables_[index].setting = scenario_.joint_setting_tuple(index);
  }
  const NoSignallingReport report =
      check_no_signalling(scenario_, tables_, no_signalling_tol);
  if (!report.ok) {
    throw std::invalid_argument(
        "tables violate no-signalling by " + std::to_string(report.max_violation));
  }
}

LocalTheory::LocalTheory(const Scenario& scenario, std::vector<double> weights) {
  const std::int64_t count = scenario.deterministic_count();
  if (static_cast<std::int64_t>(weights.size()) != count) {
    throw std::invalid_argument("local theory weight vector has wrong length");
  }
  weights_ = normalized_probabilities(std::move(weights), kProbabilityTolerance,
                                      "local theory weights");
}

LocalTheory LocalTheory::uniform(const Scenario& scenario) {
  const std::int64_t count = scenario.deterministic_count();
  return LocalTheory(scenario,
                     std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

LocalTheory LocalTheory::point_mass(const Scenario& scenario,
                                    std::int64_t vertex) {
  const std::int64_t count = scenario.deterministic_count();
  if (vertex < 0 || vertex >= count) {
    throw std::invalid_argument("point mass vertex out of range");
  }
  std::vector<double> weights(count, 0.0);
  weights[vertex] = 1.0;
  return LocalTheory(scenario, std::move(weights));
}

SettingDistribution::SettingDistribution(
    Form form, std::vector<double> probs,
    std::vector<std::vector<double>> marginals)
    : form_(form), probs_(std::move(probs)), marginals_(std::move(marginals)) {}

SettingDistribution SettingDistribution::uniform(const Scenario& scenario) {
  const int n = scenario.joint_setting_count();
  std::vector<std::vector<double>> marginals(scenario.parties());
  for (int j = 0; j < scenario.parties(); ++j) {
    marginals[j].assign(scenario.settings(j), 1.0 / scenario.settings(j));
  }
  return SettingDistribution(Form::kUniform, std::vector<double>(n, 1.0 / n),
                             std::move(marginals));
}

SettingDistribution SettingDistribution::general(const Scenario& scenario,
                                                 std::vector<double> probs) {
  if (static_cast<int>(probs.size()) != scenario.joint_setting_count()) {
    throw std::invalid_argument("setting distribution has wrong length");
  }
  probs = normalized_probabilities(std::move(probs), kProbabilityTolerance,
                                   "setting distribution");
  return SettingDistribution(Form::kGeneral, std::move(probs), {});
}

SettingDistribution SettingDistribution::product(
    const Scenario& scenario, std::vector<std::vector<double>> marginals) {
  if (static_cast<int>(marginals.size()) != scenario.parties()) {
    throw std::invalid_argument("need one marginal per party");
  }
  for (int j = 0; j < scenario.parties(); ++j) {
    if (static_cast<int>(marginals[j].size()) != scenario.settings(j)) {
      throw std::invalid_argument("party marginal has wrong length");
    }
    marginals[j] = normalized_probabilities(std::move(marginals[j]),
                                            kProbabilityTolerance,
                                            "party setting marginal");
  }
  const int n = scenario.joint_setting_count();
  std::vector<double> probs(n, 1.0);
  for (int index = 0; index < n; ++index) {
    const std::vector<int> tuple = scenario.joint_setting_tuple(index);
    for (int j = 0; j < scenario.parties(); ++j) {
      probs[index] *= marginals[j][tuple[j]];
    }
  }
  return SettingDistribution(Form::kProduct, std::move(probs),
                             std::move(marginals));
}

namespace {

// Applies fn(vertex_index, outcome_of_pair) over all deterministic theories
// without materializing them: fn receives the flat outcome assignment.
template <typename Fn>
void for_each_assignment(const Scenario& scenario, Fn&& fn) {
  const std::int64_t count = scenario.deterministic_count();
  std::vector<int> radix(scenario.pair_count());
  for (int j = 0; j < scenario.parties(); ++j) {
    for (int s = 0; s < scenario.settings(j); ++s) {
      radix[scenario.pair_index(j, s)] = scenario.outcomes(j, s);
    }
  }
  std::vector<int> outcome(scenario.pair_count(), 0);
  for (std::int64_t v = 0; v < count; ++v) {
    fn(v, outcome);
    for (int p = scenario.pair_count() - 1; p >= 0; --p) {
      if (++outcome[p] < radix[p]) break;
      outcome[p] = 0;
    }
  }
}

}  // namespace

std::vector<ConditionalTable> induced_tables(const Scenario& scenario,
                                             const LocalTheory& theory) {
  const int n_settings = scenario.joint_setting_count();
  std::vector<ConditionalTable> tables(n_settings);
  std::vector<std::vector<int>> tuples(n_settings);
  for (int s = 0; s < n_settings; ++s) {
    tables[s].setting = scenario.joint_setting_tuple(s);
    tables[s].probs.assign(scenario.outcome_count(tables[s].setting), 0.0);
    tuples[s] = tables[s].setting;
  }
  const std::vector<double>& weights = theory.weights();
  for_each_assignment(scenario, [&](std::int64_t v, const std::vector<int>& outcome) {
    const double w = weights[static_cast<std::size_t>(v)];
    if (w == 0.0) return;
    for (int s = 0; s < n_settings; ++s) {
      int cell = 0;
      for (int j = 0; j < scenario.parties(); ++j) {
        const int setting_j = tuples[s][j];
        cell = cell * scenario.outcomes(j, setting_j) +
               outcome[scenario.pair_index(j, setting_j)];
      }
      tables[s].probs[cell] += w;
    }
  });
  return tables;
}

ConditionalTable induced_conditional(const Scenario& scenario,
                                     const LocalTheory& theory,
                                     int joint_setting) {
  return induced_tables(scenario, theory)[joint_setting];
}

ConditionalTable induced_conditional(const Scenario& scenario,
                                     const LocalTheory& theory,
                                     const std::vector<int>& setting) {
  return induced_conditional(scenario, theory,
                             scenario.joint_setting_index(setting));
}

NonlocalityProof induced_proof(const Scenario& scenario,
                               const LocalTheory& theory, std::string name) {
  return NonlocalityProof(scenario, induced_tables(scenario, theory),
                          std::move(name));
}

NoSignallingReport check_no_signalling(
    const Scenario& scenario, const std::vector<ConditionalTable>& tables,
    double tol) {
  NoSignallingReport report;
  const int n_settings = scenario.joint_setting_count();
  // Marginal of party j's outcome at joint setting index s.
  auto marginal = [&](int s, int j) {
    const ConditionalTable& table = tables[s];
    std::vector<double> m(scenario.outcomes(j, table.setting[j]), 0.0);
    for (int z = 0; z < static_cast<int>(table.probs.size()); ++z) {
      m[scenario.outcome_tuple(table.setting, z)[j]] += table.probs[z];
    }
    return m;
  };
  for (int j = 0; j < scenario.parties(); ++j) {
    for (int sj = 0; sj < scenario.settings(j); ++sj) {
      int reference = -1;
      std::vector<double> ref_marginal;
      for (int s = 0; s < n_settings; ++s) {
        if (tables[s].setting[j] != sj) continue;
        std::vector<double> m = marginal(s, j);
        if (reference < 0) {
          reference = s;
          ref_marginal = std::move(m);
          continue;
        }
        for (std::size_t x = 0; x < m.size(); ++x) {
          const double violation = std::abs(m[x] - ref_marginal[x]);
          if (violation > report.max_violation) {
            report.max_violation = violation;
            report.party = j;
            report.party_setting = sj;
            report.joint_setting_a = reference;
            report.joint_setting_b = s;
          }
        }
      }
    }
  }
  report.ok = report.max_violation <= tol;
  return report;
}

NoSignallingReport check_no_signalling(const NonlocalityProof& proof,
                                       double tol) {
  return check_no_signalling(proof.scenario(), proof.tables(), tol);
}

}  // namespace bellstrength
