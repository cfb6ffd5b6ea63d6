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

#include "bellstrength/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellstrength {

namespace {
constexpr double kUnitTolerance = 1e-12;
}

PureState::PureState(std::vector<Amplitude> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  std::size_t dim = amplitudes_.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("state dimension must be a power of two >= 2");
  }
  qubits_ = 0;
  while ((std::size_t{1} << qubits_) < dim) ++qubits_;
  double norm2 = 0.0;
  for (const Amplitude& a : amplitudes_) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("state is not normalized");
  }
}

MeasurementBasis::MeasurementBasis(int party, int setting, Amplitude true0,
                                   Amplitude true1)
    : party_(party), setting_(setting), true_{true0, true1} {
  const double norm2 = std::norm(true0) + std::norm(true1);
  if (std::abs(norm2 - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("measurement vector is not unit norm");
  }
  // Orthogonal complement; <true|false> = 0 by construction.
  false_ = {-std::conj(true1), std::conj(true0)};
}

MeasurementBasis MeasurementBasis::rotated(int party, int setting, double phi) {
  return MeasurementBasis(party, setting, std::cos(phi), std::sin(phi));
}

ConditionalTable born_table(const PureState& state,
                            const std::vector<MeasurementBasis>& bases,
                            const Scenario& scenario) {
  const int k = scenario.parties();
  if (state.qubits() != k || static_cast<int>(bases.size()) != k) {
    throw std::invalid_argument("born_table: one qubit and one basis per party");
  }
  ConditionalTable table;
  table.setting.resize(k);
  for (int j = 0; j < k; ++j) {
    if (bases[j].party() != j) {
      throw std::invalid_argument("born_table: bases must be listed per party");
    }
    table.setting[j] = bases[j].setting();
    if (scenario.outcomes(j, table.setting[j]) != 2) {
      throw std::invalid_argument("born_table: qubit measurements have 2 outcomes");
    }
  }
  const int n_outcomes = 1 << k;
  table.probs.resize(n_outcomes);
  const std::vector<Amplitude>& psi = state.amplitudes();
  for (int z = 0; z < n_outcomes; ++z) {
    // Outcome tuple in party-major order: party 0 owns the top bit of z.
    Amplitude overlap = 0.0;
    for (int basis_state = 0; basis_state < n_outcomes; ++basis_state) {
      Amplitude coeff = 1.0;
      for (int j = 0; j < k; ++j) {
        const int outcome_j = (z >> (k - 1 - j)) & 1;
        const int bit_j = (basis_state >> (k - 1 - j)) & 1;
        coeff *= std::conj(bases[j].vector(outcome_j)[bit_j]);
      }
      overlap += coeff * psi[basis_state];
    }
    // Amplitudes that cancel exactly in the algebra leave ~1e-16 roundoff;
    // snap their squares to a true zero so downstream support sets are exact.
    const double p = std::norm(overlap);
    table.probs[z] = p < 1e-24 ? 0.0 : p;
  }
  return table;
}

NonlocalityProof proof_from_state(
    const PureState& state,
    const std::vector<std::vector<MeasurementBasis>>& bases_per_party,
    std::string name) {
  const int k = static_cast<int>(bases_per_party.size());
  std::vector<int> settings_per_party(k);
  for (int j = 0; j < k; ++j) {
    settings_per_party[j] = static_cast<int>(bases_per_party[j].size());
  }
  std::vector<std::vector<int>> outcomes(k);
  for (int j = 0; j < k; ++j) outcomes[j].assign(settings_per_party[j], 2);
  Scenario scenario(k, settings_per_party, outcomes);

  std::vector<ConditionalTable> tables;
  tables.reserve(scenario.joint_setting_count());
  for (int s = 0; s < scenario.joint_setting_count(); ++s) {
    const std::vector<int> tuple = scenario.joint_setting_tuple(s);
    std::vector<MeasurementBasis> chosen;
    chosen.reserve(k);
    for (int j = 0; j < k; ++j) chosen.push_back(bases_per_party[j][tuple[j]]);
    tables.push_back(born_table(state, chosen, scenario));
  }
  return NonlocalityProof(std::move(scenario), std::move(tables),
                          std::move(name));
}

namespace {

using std::numbers::pi;

PureState two_qubit_bell_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return PureState({r, 0.0, 0.0, r});
}

std::vector<MeasurementBasis> rotated_settings(int party,
                                               const std::vector<double>& angles) {
  std::vector<MeasurementBasis> out;
  out.reserve(angles.size());
  for (int s = 0; s < static_cast<int>(angles.size()); ++s) {
    out.push_back(MeasurementBasis::rotated(party, s, angles[s]));
  }
  return out;
}

NonlocalityProof make_bell() {
  return proof_from_state(two_qubit_bell_state(),
                          {rotated_settings(0, {0.0, pi / 8}),
                           rotated_settings(1, {pi / 8, pi / 4})},
                          "bell");
}

NonlocalityProof make_bell_optimized() {
  return proof_from_state(two_qubit_bell_state(),
                          {rotated_settings(0, {0.0, pi / 6}),
                           rotated_settings(1, {0.0, pi / 3})},
                          "bell-optimized");
}

NonlocalityProof make_chsh() {
  return proof_from_state(two_qubit_bell_state(),
                          {rotated_settings(0, {0.0, pi / 4}),
                           rotated_settings(1, {pi / 8, -pi / 8})},
                          "chsh");
}

NonlocalityProof make_hardy() {
  // The state alpha|00> - beta|11> with the closed-form alpha; the printed
  // 0.907 / 0.421 are roundings of these radicals.
  const double alpha = 0.5 * std::sqrt(2.0 + 2.0 * std::sqrt(-13.0 + 6.0 * std::sqrt(5.0)));
  const double beta = std::sqrt(1.0 - alpha * alpha);
  PureState state({alpha, 0.0, 0.0, -beta});
  const double a3 = alpha * alpha * alpha;
  const double b3 = beta * beta * beta;
  auto setting0 = [&](int party) {
    return MeasurementBasis(party, 0, std::sqrt(beta / (alpha + beta)),
                            std::sqrt(alpha / (alpha + beta)));
  };
  auto setting1 = [&](int party) {
    return MeasurementBasis(party, 1, -std::sqrt(b3 / (a3 + b3)),
                            std::sqrt(a3 / (a3 + b3)));
  };
  return proof_from_state(state,
                          {{setting0(0), setting1(0)}, {setting0(1), setting1(1)}},
                          "hardy");
}

NonlocalityProof make_mermin() {
  const std::vector<double> angles = {0.0, 2 * pi / 3, 4 * pi / 3};
  return proof_from_state(two_qubit_bell_state(),
                          {rotated_settings(0, angles), rotated_settings(1, angles)},
                          "mermin");
}

NonlocalityProof make_ghz() {
  const double r = 1.0 / std::sqrt(2.0);
  PureState state({r, 0, 0, 0, 0, 0, 0, r});
  auto settings = [&](int party) {
    return std::vector<MeasurementBasis>{
        MeasurementBasis(party, 0, r, r),
        MeasurementBasis(party, 1, r, Amplitude(0.0, r))};
  };
  return proof_from_state(state, {settings(0), settings(1), settings(2)}, "ghz");
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "bell", "bell-optimized", "chsh", "hardy", "mermin", "ghz"};
  return names;
}

NonlocalityProof catalog(const std::string& name) {
  if (name == "bell") return make_bell();
  if (name == "bell-optimized") return make_bell_optimized();
  if (name == "chsh") return make_chsh();
  if (name == "hardy") return make_hardy();
  if (name == "mermin") return make_mermin();
  if (name == "ghz") return make_ghz();
  throw std::invalid_argument("unknown catalog proof: " + name);
}

namespace {

// Event probabilities for two-party tables; outcome 1 is "true".
double pr_unequal(const NonlocalityProof& proof, int a, int b) {
  const ConditionalTable& t = proof.table(proof.scenario().joint_setting_index({a, b}));
  double p = 0.0;
  for (int z = 0; z < static_cast<int>(t.probs.size()); ++z) {
    const std::vector<int> xy = proof.scenario().outcome_tuple(t.setting, z);
    if (xy[0] != xy[1]) p += t.probs[z];
  }
  return p;
}

double pr_equal(const NonlocalityProof& proof, int a, int b) {
  return 1.0 - pr_unequal(proof, a, b);
}

double pr_outcome(const NonlocalityProof& proof, int a, int b, int x, int y) {
  const Scenario& sc = proof.scenario();
  const int s = sc.joint_setting_index({a, b});
  return proof.prob(s, sc.outcome_index({a, b}, {x, y}));
}

// Probability that the parity of "true" outcomes is odd at a 3-party setting.
double pr_odd_parity(const NonlocalityProof& proof, const std::vector<int>& abc) {
  const Scenario& sc = proof.scenario();
  const ConditionalTable& t = proof.table(sc.joint_setting_index(abc));
  double p = 0.0;
  for (int z = 0; z < static_cast<int>(t.probs.size()); ++z) {
    const std::vector<int> xyz = sc.outcome_tuple(t.setting, z);
    if ((xyz[0] + xyz[1] + xyz[2]) % 2 == 1) p += t.probs[z];
  }
  return p;
}

ViolationReport chsh_inequality(const NonlocalityProof& proof) {
  ViolationReport report;
  report.inequality =
      "Pr(X2!=Y2) <= Pr(X1!=Y1) + Pr(X1!=Y2) + Pr(X2!=Y1)";
  report.lhs = pr_unequal(proof, 1, 1);
  report.rhs = pr_unequal(proof, 0, 0) + pr_unequal(proof, 0, 1) +
               pr_unequal(proof, 1, 0);
  report.slack = report.lhs - report.rhs;
  return report;
}

ViolationReport bell_inequality(const NonlocalityProof& proof) {
  ViolationReport report;
  report.inequality =
      "Pr(X1=Y1) <= Pr(X2!=Y2) + Pr(X2!=Y1) + Pr(X1!=Y2)";
  report.lhs = pr_equal(proof, 0, 0);
  report.rhs = pr_unequal(proof, 1, 1) + pr_unequal(proof, 1, 0) +
               pr_unequal(proof, 0, 1);
  report.slack = report.lhs - report.rhs;
  return report;
}

// Bell's three-angle argument with the distant pair on the left; this is the
// orientation the optimized variant violates.
ViolationReport bell_optimized_inequality(const NonlocalityProof& proof) {
  ViolationReport report;
  report.inequality =
      "Pr(X1!=Y2) <= Pr(X1!=Y1) + Pr(X2!=Y1) + Pr(X2!=Y2)";
  report.lhs = pr_unequal(proof, 0, 1);
  report.rhs = pr_unequal(proof, 0, 0) + pr_unequal(proof, 1, 0) +
               pr_unequal(proof, 1, 1);
  report.slack = report.lhs - report.rhs;
  return report;
}

ViolationReport hardy_inequality(const NonlocalityProof& proof) {
  ViolationReport report;
  report.inequality =
      "Pr(X2&Y2) <= Pr(X2&!Y1) + Pr(!X1&Y2) + Pr(X1&Y1)";
  report.lhs = pr_outcome(proof, 1, 1, 1, 1);
  report.rhs = pr_outcome(proof, 1, 0, 1, 0) + pr_outcome(proof, 0, 1, 0, 1) +
               pr_outcome(proof, 0, 0, 1, 1);
  report.slack = report.lhs - report.rhs;
  return report;
}

ViolationReport mermin_inequality(const NonlocalityProof& proof) {
  ViolationReport report;
  report.inequality =
      "1 <= sum_i Pr(Xi!=Yi) + 1/2 sum_{i!=j} Pr(Xi=Yj)";
  report.lhs = 1.0;
  double rhs = 0.0;
  for (int i = 0; i < 3; ++i) rhs += pr_unequal(proof, i, i);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) rhs += 0.5 * pr_equal(proof, i, j);
    }
  }
  report.rhs = rhs;
  report.slack = report.lhs - report.rhs;
  return report;
}

ViolationReport ghz_inequality(const NonlocalityProof& proof) {
  ViolationReport report;
  report.inequality =
      "Pr(X1^Y1^Z1) <= Pr(X1^Y2^Z2) + Pr(X2^Y1^Z2) + Pr(X2^Y2^Z1)";
  report.lhs = pr_odd_parity(proof, {0, 0, 0});
  report.rhs = pr_odd_parity(proof, {0, 1, 1}) + pr_odd_parity(proof, {1, 0, 1}) +
               pr_odd_parity(proof, {1, 1, 0});
  report.slack = report.lhs - report.rhs;
  return report;
}

}  // namespace

ViolationReport violation_report(const NonlocalityProof& proof) {
  const std::string& name = proof.name();
  if (name == "bell") return bell_inequality(proof);
  if (name == "bell-optimized") return bell_optimized_inequality(proof);
  if (name == "chsh") return chsh_inequality(proof);
  if (name == "hardy") return hardy_inequality(proof);
  if (name == "mermin") return mermin_inequality(proof);
  if (name == "ghz") return ghz_inequality(proof);
  const Scenario& sc = proof.scenario();
  if (sc == Scenario::symmetric(2, 2, 2)) return chsh_inequality(proof);
  if (sc == Scenario::symmetric(2, 3, 2)) return mermin_inequality(proof);
  if (sc == Scenario::symmetric(3, 2, 2)) return ghz_inequality(proof);
  throw std::invalid_argument("no inequality template for scenario " +
                              sc.describe());
}

}  // namespace bellstrength
