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

#include "bellstrength/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bellstrength {

namespace {

using nlohmann::json;

std::string outcome_key(const std::vector<int>& tuple) {
  std::ostringstream out;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    if (j) out << ',';
    out << tuple[j];
  }
  return out.str();
}

std::vector<int> parse_tuple(const std::string& key, int arity) {
  std::vector<int> tuple;
  std::istringstream in(key);
  std::string part;
  while (std::getline(in, part, ',')) tuple.push_back(std::stoi(part));
  if (static_cast<int>(tuple.size()) != arity) {
    throw std::invalid_argument("outcome key '" + key + "' has wrong arity");
  }
  return tuple;
}

json table_to_json(const Scenario& scenario, const ConditionalTable& table) {
  json probs = json::object();
  for (int z = 0; z < static_cast<int>(table.probs.size()); ++z) {
    probs[outcome_key(scenario.outcome_tuple(table.setting, z))] =
        table.probs[z];
  }
  return json{{"setting", table.setting}, {"probs", std::move(probs)}};
}

ConditionalTable table_from_json(const Scenario& scenario, const json& j) {
  ConditionalTable table;
  table.setting = j.at("setting").get<std::vector<int>>();
  table.probs.assign(scenario.outcome_count(table.setting), 0.0);
  for (const auto& [key, value] : j.at("probs").items()) {
    const std::vector<int> tuple = parse_tuple(key, scenario.parties());
    table.probs[scenario.outcome_index(table.setting, tuple)] =
        value.get<double>();
  }
  return table;
}

Scenario scenario_from_json(const json& j) {
  return Scenario(j.at("parties").get<int>(),
                  j.at("settings_per_party").get<std::vector<int>>(),
                  j.at("outcomes_per_setting")
                      .get<std::vector<std::vector<int>>>());
}

json scenario_to_json(const Scenario& scenario, const std::string& name) {
  json j;
  if (!name.empty()) j["name"] = name;
  j["parties"] = scenario.parties();
  j["settings_per_party"] = scenario.settings_per_party();
  j["outcomes_per_setting"] = scenario.outcomes_per_setting();
  return j;
}

}  // namespace

json proof_to_json(const NonlocalityProof& proof) {
  json j = scenario_to_json(proof.scenario(), proof.name());
  json tables = json::array();
  for (const ConditionalTable& table : proof.tables()) {
    tables.push_back(table_to_json(proof.scenario(), table));
  }
  j["tables"] = std::move(tables);
  return j;
}

NonlocalityProof proof_from_json(const json& j) {
  Scenario scenario = scenario_from_json(j);
  std::vector<ConditionalTable> tables;
  for (const json& entry : j.at("tables")) {
    tables.push_back(table_from_json(scenario, entry));
  }
  const std::string name = j.contains("name") ? j.at("name").get<std::string>() : "";
  return NonlocalityProof(std::move(scenario), std::move(tables), name);
}

json gamma_to_json(const Scenario& scenario, const GammaTable& gamma) {
  json j = scenario_to_json(scenario, "");
  json tables = json::array();
  for (const ConditionalTable& table : gamma.tables) {
    tables.push_back(table_to_json(scenario, table));
  }
  j["tables"] = std::move(tables);
  return j;
}

std::pair<Scenario, GammaTable> gamma_from_json(const json& j) {
  Scenario scenario = scenario_from_json(j);
  GammaTable gamma;
  for (const json& entry : j.at("tables")) {
    ConditionalTable table = table_from_json(scenario, entry);
    table.probs = normalized_probabilities(std::move(table.probs),
                                           kProbabilityTolerance, "gamma table");
    gamma.settings.push_back(scenario.joint_setting_index(table.setting));
    gamma.tables.push_back(std::move(table));
  }
  return {std::move(scenario), std::move(gamma)};
}

json sigma_to_json(const SettingDistribution& sigma) {
  json j;
  switch (sigma.form()) {
    case SettingDistribution::Form::kUniform: j["form"] = "uniform"; break;
    case SettingDistribution::Form::kProduct: j["form"] = "product"; break;
    case SettingDistribution::Form::kGeneral: j["form"] = "general"; break;
  }
  j["probs"] = sigma.probs();
  if (sigma.form() != SettingDistribution::Form::kGeneral) {
    j["marginals"] = sigma.marginals();
  }
  return j;
}

SettingDistribution parse_sigma(const Scenario& scenario,
                                const std::string& spec) {
  if (spec.empty() || spec == "uniform") {
    return SettingDistribution::uniform(scenario);
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("bad sigma spec: " + spec);
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  auto parse_list = [](const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) values.push_back(std::stod(part));
    return values;
  };
  if (kind == "general") {
    return SettingDistribution::general(scenario, parse_list(body));
  }
  if (kind == "product") {
    std::vector<std::vector<double>> marginals;
    std::istringstream in(body);
    std::string per_party;
    while (std::getline(in, per_party, ';')) {
      marginals.push_back(parse_list(per_party));
    }
    return SettingDistribution::product(scenario, std::move(marginals));
  }
  throw std::invalid_argument("bad sigma spec: " + spec);
}

json tables_to_json(const Scenario& scenario,
                    const std::vector<ConditionalTable>& tables) {
  json out = json::array();
  for (const ConditionalTable& table : tables) {
    out.push_back(table_to_json(scenario, table));
  }
  return out;
}

json projection_to_json(const NonlocalityProof& proof,
                        const ProjectionResult& result) {
  json j;
  j["value_bits"] = result.value_bits;
  j["kkt_residual"] = result.kkt_residual;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["pi_star"] = result.weights;
  j["induced_tables"] = tables_to_json(proof.scenario(), result.induced);
  return j;
}

json strength_to_json(const NonlocalityProof& proof,
                      const StrengthResult& result) {
  json j;
  j["mode"] = to_string(result.mode);
  j["strength_bits"] = result.strength_bits;
  j["sigma_star"] = sigma_to_json(result.sigma_star);
  j["pi_star"] = result.pi_star;
  j["kkt_residual"] = result.kkt_residual;
  if (result.crosscheck_gap.has_value()) {
    j["crosscheck_gap"] = *result.crosscheck_gap;
  } else {
    j["crosscheck_gap"] = nullptr;
  }
  j["converged"] = result.converged;
  j["best_classical"] = tables_to_json(proof.scenario(), result.best_classical);
  return j;
}

json minimax_to_json(const MinimaxResult& result) {
  return json{{"value_bits", result.value_bits},
              {"pi_star", result.pi_star},
              {"gap", result.gap},
              {"converged", result.converged},
              {"per_setting_bits", result.per_setting_bits}};
}

json decomposition_to_json(const GammaDecomposition& decomposition) {
  return json{{"weights", decomposition.weights.weights()},
              {"reconstruction_error", decomposition.reconstruction_error},
              {"steps", decomposition.steps}};
}

json evidence_to_json(const EvidenceTrace& trace) {
  json j;
  j["n"] = trace.n;
  if (trace.infinite) {
    j["total_llr_bits"] = "infinity";
  } else {
    j["total_llr_bits"] = trace.total_llr_bits;
  }
  j["per_trial_mean"] = trace.per_trial_mean;
  j["per_trial_stddev"] = trace.per_trial_stddev;
  j["infinite"] = trace.infinite;
  if (!trace.running_history.empty()) {
    j["running_history"] = trace.running_history;
  }
  return j;
}

json violation_to_json(const ViolationReport& report) {
  return json{{"inequality", report.inequality},
              {"lhs", report.lhs},
              {"rhs", report.rhs},
              {"slack", report.slack}};
}

NonlocalityProof load_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open proof file: " + path);
  json j;
  in >> j;
  return proof_from_json(j);
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace bellstrength
