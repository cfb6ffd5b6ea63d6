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

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bellstrength/json_io.hpp"
#include "bellstrength/quantum.hpp"
#include "cli.hpp"
#include "test_support.hpp"

using namespace bellstrength;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/bellstrength_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("proof JSON round-trips without loss") {
  for (const std::string& name : catalog_names()) {
    const NonlocalityProof proof = catalog(name);
    const NonlocalityProof reloaded = proof_from_json(proof_to_json(proof));
    CHECK(reloaded.name() == proof.name());
    CHECK(reloaded.scenario() == proof.scenario());
    for (int s = 0; s < proof.scenario().joint_setting_count(); ++s) {
      for (std::size_t z = 0; z < proof.table(s).probs.size(); ++z) {
        CHECK(std::abs(reloaded.prob(s, z) - proof.prob(s, z)) <= 1e-15);
      }
    }
  }
}

TEST_CASE("proof JSON renormalizes slightly off inputs and rejects bad ones") {
  nlohmann::json j = proof_to_json(catalog("chsh"));
  j["tables"][0]["probs"]["0,0"] =
      j["tables"][0]["probs"]["0,0"].get<double>() + 5e-13;
  const NonlocalityProof reloaded = proof_from_json(j);
  double sum = 0.0;
  for (double p : reloaded.table(0).probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  j["tables"][0]["probs"]["0,0"] = 0.9;  // breaks normalization badly
  CHECK_THROWS_AS(proof_from_json(j), std::invalid_argument);
}

TEST_CASE("sigma specs parse into the three forms") {
  const Scenario sc = Scenario::symmetric(2, 2, 2);
  CHECK(parse_sigma(sc, "uniform").form() == SettingDistribution::Form::kUniform);
  const SettingDistribution product = parse_sigma(sc, "product:0.6,0.4;0.3,0.7");
  CHECK(product.form() == SettingDistribution::Form::kProduct);
  CHECK(product.prob(sc.joint_setting_index({0, 1})) == doctest::Approx(0.42));
  const SettingDistribution general = parse_sigma(sc, "general:0.4,0.3,0.2,0.1");
  CHECK(general.prob(0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(parse_sigma(sc, "banana"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sigma(sc, "general:1,2,3"), std::invalid_argument);
}

TEST_CASE("cli: export, reload, and project a catalog experiment") {
  TempFile file("chsh.json");
  const CliRun exported = run_cli({"export-proof", "chsh", "-o", file.path});
  CHECK(exported.code == 0);

  const CliRun projected =
      run_cli({"project", file.path, "--sigma", "uniform", "--json"});
  CHECK(projected.code == 0);
  const nlohmann::json j = nlohmann::json::parse(projected.out);
  CHECK(j.at("value_bits").get<double>() ==
        doctest::Approx(0.0462738469).epsilon(1e-9));
  CHECK(j.at("converged").get<bool>());
}

TEST_CASE("cli: strength table output carries ten decimals") {
  const CliRun run = run_cli({"strength", "chsh", "--mode", "uniform"});
  CHECK(run.code == 0);
  CHECK(run.out.find("0.0462738469") != std::string::npos);
}

TEST_CASE("cli: violation report") {
  const CliRun run = run_cli({"violation-report", "ghz", "--json"});
  CHECK(run.code == 0);
  const nlohmann::json j = nlohmann::json::parse(run.out);
  CHECK(j.at("slack").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("cli: simulate emits a deterministic evidence trace") {
  const CliRun a = run_cli({"simulate", "chsh", "-n", "2000", "--seed", "42",
                            "--against", "best-lr"});
  const CliRun b = run_cli({"simulate", "chsh", "-n", "2000", "--seed", "42",
                            "--against", "best-lr"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const nlohmann::json j = nlohmann::json::parse(a.out);
  CHECK(j.at("n").get<int>() == 2000);
  CHECK(j.at("per_trial_mean").get<double>() ==
        doctest::Approx(0.0462738469).epsilon(0.25));
}

TEST_CASE("cli: decompose a three-setting family from disk") {
  const NonlocalityProof chsh = catalog("chsh");
  GammaTable gamma = gamma_from_proof(chsh, {0, 1, 2});
  TempFile file("gamma.json");
  save_json_file(file.path, gamma_to_json(chsh.scenario(), gamma));

  const CliRun run = run_cli({"decompose", file.path, "--json"});
  CHECK(run.code == 0);
  const nlohmann::json j = nlohmann::json::parse(run.out);
  CHECK(j.at("reconstruction_error").get<double>() <= 1e-9);
  double sum = 0.0;
  for (double w : j.at("weights").get<std::vector<double>>()) sum += w;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("cli: exit codes distinguish usage errors") {
  CHECK(run_cli({"strength"}).code == 1);               // missing argument
  CHECK(run_cli({"export-proof", "nope"}).code == 1);   // unknown name
  CHECK(run_cli({"project", "/no/such/file.json"}).code == 1);
  CHECK(run_cli({"strength", "chsh", "--mode", "sideways"}).code == 1);
}

TEST_CASE("cli: single-experiment verification against the published table") {
  const CliRun run = run_cli({"verify-paper-table", "--proof", "hardy"});
  CHECK(run.code == 0);
  CHECK(run.out.find("0.0278585182") != std::string::npos);
  CHECK(run.out.find("0.0279816333") != std::string::npos);
  CHECK(run.out.find("0.0280347655") != std::string::npos);
  CHECK(run.out.find("FAIL") == std::string::npos);
}
