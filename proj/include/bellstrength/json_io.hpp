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

#include <nlohmann/json_fwd.hpp>

#include "bellstrength/games.hpp"
#include "bellstrength/polytope.hpp"
#include "bellstrength/projection.hpp"
#include "bellstrength/proof.hpp"
#include "bellstrength/quantum.hpp"
#include "bellstrength/simulate.hpp"

namespace bellstrength {

// Proof schema:
//   { "name": str, "parties": k, "settings_per_party": [..],
//     "outcomes_per_setting": [[..] per party],
//     "tables": [ { "setting": [s_1..s_k], "probs": { "o_1,..,o_k": p } } ] }
// Setting and outcome indices are 0-based. Probability values survive a
// round trip exactly (shortest-round-trip serialization).
nlohmann::json proof_to_json(const NonlocalityProof& proof);
NonlocalityProof proof_from_json(const nlohmann::json& j);

// Same header, but `tables` lists only the covered subset of settings.
nlohmann::json gamma_to_json(const Scenario& scenario, const GammaTable& gamma);
std::pair<Scenario, GammaTable> gamma_from_json(const nlohmann::json& j);

nlohmann::json sigma_to_json(const SettingDistribution& sigma);
// Textual forms: "uniform", "product:p1,p2;q1,q2,q3", "general:s1,s2,..".
SettingDistribution parse_sigma(const Scenario& scenario,
                                const std::string& spec);

nlohmann::json tables_to_json(const Scenario& scenario,
                              const std::vector<ConditionalTable>& tables);

nlohmann::json projection_to_json(const NonlocalityProof& proof,
                                  const ProjectionResult& result);
nlohmann::json strength_to_json(const NonlocalityProof& proof,
                                const StrengthResult& result);
nlohmann::json minimax_to_json(const MinimaxResult& result);
nlohmann::json decomposition_to_json(const GammaDecomposition& decomposition);
nlohmann::json evidence_to_json(const EvidenceTrace& trace);
nlohmann::json violation_to_json(const ViolationReport& report);

NonlocalityProof load_proof_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace bellstrength
