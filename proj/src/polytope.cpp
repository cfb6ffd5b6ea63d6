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

#include "bellstrength/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bellstrength/projection.hpp"

namespace bellstrength {

GammaTable gamma_from_proof(const NonlocalityProof& proof,
                            const std::vector<int>& settings) {
  GammaTable gamma;
  gamma.settings = settings;
  std::sort(gamma.settings.begin(), gamma.settings.end());
  for (int s : gamma.settings) gamma.tables.push_back(proof.table(s));
  return gamma;
}

NoSignallingReport check_gamma_no_signalling(const Scenario& scenario,
                                             const GammaTable& gamma,
                                             double tol) {
  NoSignallingReport report;
  const int n = static_cast<int>(gamma.settings.size());
  auto marginal = [&](int k, int j) {
    const ConditionalTable& table = gamma.tables[k];
    std::vector<double> m(scenario.outcomes(j, table.setting[j]), 0.0);
    for (int z = 0; z < static_cast<int>(table.probs.size()); ++z) {
      m[scenario.outcome_tuple(table.setting, z)[j]] += table.probs[z];
    }
    return m;
  };
  for (int j = 0; j < scenario.parties(); ++j) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (gamma.tables[a].setting[j] != gamma.tables[b].setting[j]) continue;
        const std::vector<double> ma = marginal(a, j);
        const std::vector<double> mb = marginal(b, j);
        for (std::size_t x = 0; x < ma.size(); ++x) {
          const double violation = std::abs(ma[x] - mb[x]);
          if (violation > report.max_violation) {
            report.max_violation = violation;
            report.party = j;
            report.party_setting = gamma.tables[a].setting[j];
            report.joint_setting_a = gamma.settings[a];
            report.joint_setting_b = gamma.settings[b];
          }
        }
      }
    }
  }
  report.ok = report.max_violation <= tol;
  return report;
}

GammaDecomposition decompose_gamma(const GammaTable& gamma,
                                   const Scenario& scenario) {
  if (scenario.parties() != 2 || scenario.settings(0) != 2 ||
      scenario.settings(1) != 2) {
    throw std::invalid_argument(
        "gamma decomposition covers two-party, two-setting scenarios");
  }
  const int n_subset = static_cast<int>(gamma.settings.size());
  if (n_subset < 1 || n_subset > 3 ||
      static_cast<int>(gamma.tables.size()) != n_subset) {
    throw std::invalid_argument(
        "gamma decomposition expects at most three settings with one table each");
  }
  {
    const NoSignallingReport ns = check_gamma_no_signalling(scenario, gamma);
    if (!ns.ok) {
      throw std::invalid_argument(
          "no decomposition exists: no-signalling restriction violated for party " +
          std::to_string(ns.party) + " setting " +
          std::to_string(ns.party_setting) + " between joint settings " +
          std::to_string(ns.joint_setting_a) + " and " +
          std::to_string(ns.joint_setting_b) + " by " +
          std::to_string(ns.max_violation));
    }
  }

  const std::int64_t n_vertices = scenario.deterministic_count();
  // Cell selected by each vertex at each subset setting, plus flat residuals.
  std::vector<int> offset(n_subset);
  int total = 0;
  std::vector<double> residual;
  for (int k = 0; k < n_subset; ++k) {
    offset[k] = total;
    const ConditionalTable& table = gamma.tables[k];
    if (static_cast<int>(table.probs.size()) !=
        scenario.outcome_count(table.setting)) {
      throw std::invalid_argument("gamma table has wrong outcome count");
    }
    std::vector<double> probs = normalized_probabilities(
        table.probs, kProbabilityTolerance, "gamma table");
    residual.insert(residual.end(), probs.begin(), probs.end());
    total += static_cast<int>(probs.size());
  }
  std::vector<std::vector<int>> cells(
      static_cast<std::size_t>(n_vertices), std::vector<int>(n_subset));
  {
    const std::vector<DeterministicTheory> theories =
        enumerate_deterministic(scenario);
    for (std::int64_t v = 0; v < n_vertices; ++v) {
      for (int k = 0; k < n_subset; ++k) {
        const std::vector<int>& setting = gamma.tables[k].setting;
        std::vector<int> outcome(scenario.parties());
        for (int j = 0; j < scenario.parties(); ++j) {
          outcome[j] =
              theories[static_cast<std::size_t>(v)]
                  .outcome[scenario.pair_index(j, setting[j])];
        }
        cells[static_cast<std::size_t>(v)][k] =
            offset[k] + scenario.outcome_index(setting, outcome);
      }
    }
  }

  std::vector<double> weights(static_cast<std::size_t>(n_vertices), 0.0);
  GammaDecomposition out{LocalTheory::uniform(scenario), 0.0, 0};
  const double done_eps = 1e-13;
  const int max_steps = total + 4;
  int steps = 0;
  for (; steps < max_steps; ++steps) {
    // Smallest entry that still carries mass; ties resolve to the lowest index.
    int arg_min = -1;
    double eps = 0.0;
    for (int i = 0; i < total; ++i) {
      if (residual[i] > done_eps && (arg_min < 0 || residual[i] < eps)) {
        arg_min = i;
        eps = residual[i];
      }
    }
    if (arg_min < 0) break;
    // First vertex in canonical order that hits the minimal cell and whose
    // other cells can absorb the peeled mass.
    std::int64_t chosen = -1;
    for (std::int64_t v = 0; v < n_vertices && chosen < 0; ++v) {
      const std::vector<int>& vc = cells[static_cast<std::size_t>(v)];
      bool hits = false, feasible = true;
      for (int k = 0; k < n_subset; ++k) {
        if (vc[k] == arg_min) hits = true;
        if (residual[vc[k]] < eps * (1.0 - 1e-9) - 1e-15) feasible = false;
      }
      if (hits && feasible) chosen = v;
    }
    if (chosen < 0) {
      throw std::invalid_argument(
          "no decomposition exists: peeling found no compatible deterministic theory");
    }
    weights[static_cast<std::size_t>(chosen)] += eps;
    for (int k = 0; k < n_subset; ++k) {
      double& r = residual[cells[static_cast<std::size_t>(chosen)][k]];
      r = std::max(r - eps, 0.0);
    }
  }

  double sum = 0.0;
  for (double w : weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("gamma peeling left unassigned mass of " +
                                std::to_string(1.0 - sum));
  }
  for (double& w : weights) w /= sum;

  // Re-mix and measure the worst entry deviation.
  std::vector<double> mixed(total, 0.0);
  for (std::int64_t v = 0; v < n_vertices; ++v) {
    const double w = weights[static_cast<std::size_t>(v)];
    if (w == 0.0) continue;
    for (int k = 0; k < n_subset; ++k) {
      mixed[cells[static_cast<std::size_t>(v)][k]] += w;
    }
  }
  double error = 0.0;
  int i = 0;
  for (int k = 0; k < n_subset; ++k) {
    for (double p : gamma.tables[k].probs) {
      error = std::max(error, std::abs(mixed[i++] - p));
    }
  }

  out.weights = LocalTheory(scenario, std::move(weights));
  out.reconstruction_error = error;
  out.steps = steps;
  return out;
}

LocalTheory perfect_lr_for_three_settings(const NonlocalityProof& proof,
                                          int excluded_setting) {
  const Scenario& sc = proof.scenario();
  if (excluded_setting < 0 || excluded_setting >= sc.joint_setting_count()) {
    throw std::invalid_argument("excluded setting out of range");
  }
  std::vector<int> kept;
  for (int s = 0; s < sc.joint_setting_count(); ++s) {
    if (s != excluded_setting) kept.push_back(s);
  }
  return decompose_gamma(gamma_from_proof(proof, kept), sc).weights;
}

PropernessReport is_proper(const NonlocalityProof& proof, double tol) {
  PropernessReport report;
  const ProjectionResult projection =
      project(proof, SettingDistribution::uniform(proof.scenario()),
              std::min(tol * 1e-2, 1e-9));
  report.divergence_bits = projection.value_bits;
  report.proper = projection.value_bits > tol;
  if (!report.proper) report.explaining_weights = projection.weights;
  return report;
}

}  // namespace bellstrength
