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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bellstrength/divergence.hpp"
#include "bellstrength/games.hpp"
#include "bellstrength/json_io.hpp"
#include "bellstrength/polytope.hpp"
#include "bellstrength/projection.hpp"
#include "bellstrength/quantum.hpp"
#include "bellstrength/reference.hpp"
#include "bellstrength/simulate.hpp"

namespace bellstrength::cli {

namespace {

constexpr int kUsageError = 1;
constexpr int kNonConvergence = 2;

NonlocalityProof resolve_proof(const std::string& source) {
  const auto& names = catalog_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) {
    return catalog(source);
  }
  return load_proof_file(source);
}

std::string fixed10(double x) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(10) << x;
  return out.str();
}

void print_tables(std::ostream& out, const Scenario& scenario,
                  const std::vector<ConditionalTable>& tables) {
  for (const ConditionalTable& table : tables) {
    out << "  setting (";
    for (std::size_t j = 0; j < table.setting.size(); ++j) {
      out << (j ? "," : "") << table.setting[j];
    }
    out << "):";
    for (int z = 0; z < static_cast<int>(table.probs.size()); ++z) {
      const std::vector<int> tuple = scenario.outcome_tuple(table.setting, z);
      out << "  ";
      for (std::size_t j = 0; j < tuple.size(); ++j) {
        out << (j ? "," : "") << tuple[j];
      }
      out << "=" << fixed10(table.probs[z]);
    }
    out << "\n";
  }
}

void print_sigma(std::ostream& out, const SettingDistribution& sigma) {
  out << "  sigma*:";
  for (double p : sigma.probs()) out << " " << fixed10(p);
  out << "\n";
  if (sigma.form() == SettingDistribution::Form::kProduct) {
    out << "  party marginals:";
    for (const std::vector<double>& m : sigma.marginals()) {
      out << "  (";
      for (std::size_t i = 0; i < m.size(); ++i) {
        out << (i ? "," : "") << fixed10(m[i]);
      }
      out << ")";
    }
    out << "\n";
  }
}

int cmd_export_proof(const std::string& name, const std::string& output,
                     std::ostream& out) {
  const NonlocalityProof proof = catalog(name);
  const nlohmann::json j = proof_to_json(proof);
  if (output.empty()) {
    out << j.dump(2) << "\n";
  } else {
    save_json_file(output, j);
  }
  return 0;
}

int cmd_project(const std::string& source, const std::string& sigma_spec,
                double tol, bool as_json, std::ostream& out) {
  const NonlocalityProof proof = resolve_proof(source);
  const SettingDistribution sigma = parse_sigma(proof.scenario(), sigma_spec);
  ProjectOptions options;
  options.tol = tol;
  const ProjectionResult result = project(proof, sigma, options);
  if (as_json) {
    out << projection_to_json(proof, result).dump(2) << "\n";
  } else {
    out << "divergence_bits: " << fixed10(result.value_bits) << "\n"
        << "kkt_residual: " << result.kkt_residual << "\n"
        << "iterations: " << result.iterations << "\n"
        << "closest local tables:\n";
    print_tables(out, proof.scenario(), result.induced);
  }
  return result.converged ? 0 : kNonConvergence;
}

int cmd_strength(const std::string& source, const std::string& mode,
                 bool as_json, const GameOptions& options, std::ostream& out) {
  const NonlocalityProof proof = resolve_proof(source);
  std::vector<StrengthResult> results;
  if (mode == "uniform" || mode == "all") {
    results.push_back(strength_uniform(proof, options));
  }
  if (mode == "uncorrelated" || mode == "all") {
    results.push_back(strength_uncorrelated(proof, options));
  }
  if (mode == "correlated" || mode == "all") {
    results.push_back(strength_correlated(proof, options));
  }
  if (results.empty()) {
    throw CLI::ValidationError("--mode", "unknown mode " + mode);
  }
  bool converged = true;
  if (as_json) {
    nlohmann::json j = nlohmann::json::array();
    for (const StrengthResult& r : results) {
      j.push_back(strength_to_json(proof, r));
      converged = converged && r.converged;
    }
    out << j.dump(2) << "\n";
  } else {
    for (const StrengthResult& r : results) {
      out << proof.name() << " " << to_string(r.mode)
          << " strength: " << fixed10(r.strength_bits) << "\n";
      print_sigma(out, r.sigma_star);
      out << "  kkt_residual: " << r.kkt_residual << "\n";
      if (r.crosscheck_gap.has_value()) {
        out << "  crosscheck_gap: " << *r.crosscheck_gap << "\n";
      }
      out << "  best classical tables:\n";
      print_tables(out, proof.scenario(), r.best_classical);
      converged = converged && r.converged;
    }
  }
  return converged ? 0 : kNonConvergence;
}

int cmd_verify_paper_table(const std::string& only_proof, double tol,
                           const GameOptions& options, std::ostream& out) {
  bool all_ok = true;
  out << std::left;
  for (const ReferenceStrengths& row : reference_strength_table()) {
    if (!only_proof.empty() && only_proof != row.name) continue;
    const NonlocalityProof proof = catalog(row.name);
    const double uni = strength_uniform(proof, options).strength_bits;
    const double unc = strength_uncorrelated(proof, options).strength_bits;
    const double cor = strength_correlated(proof, options).strength_bits;
    const double expected[3] = {row.uniform, row.uncorrelated, row.correlated};
    const double computed[3] = {uni, unc, cor};
    const char* labels[3] = {"uniform", "uncorrelated", "correlated"};
    for (int i = 0; i < 3; ++i) {
      const double dev = std::abs(computed[i] - expected[i]);
      const bool ok = dev <= tol;
      all_ok = all_ok && ok;
      out << (ok ? "ok   " : "FAIL ") << std::setw(15) << row.name
          << std::setw(13) << labels[i] << " computed " << fixed10(computed[i])
          << "  reference " << fixed10(expected[i]) << "  |dev| " << dev
          << "\n";
    }
  }
  return all_ok ? 0 : kNonConvergence;
}

int cmd_decompose(const std::string& path, bool as_json, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open gamma file: " + path);
  nlohmann::json j;
  in >> j;
  auto [scenario, gamma] = gamma_from_json(j);
  const GammaDecomposition decomposition = decompose_gamma(gamma, scenario);
  if (as_json) {
    out << decomposition_to_json(decomposition).dump(2) << "\n";
  } else {
    out << "reconstruction_error: " << decomposition.reconstruction_error
        << "\nsteps: " << decomposition.steps << "\nweights:";
    const std::vector<double>& w = decomposition.weights.weights();
    for (std::size_t v = 0; v < w.size(); ++v) {
      if (w[v] > 0.0) out << " [" << v << "]=" << fixed10(w[v]);
    }
    out << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& source, const std::string& sigma_spec,
                 std::int64_t n, std::uint64_t seed, const std::string& against,
                 std::int64_t history, std::ostream& out) {
  const NonlocalityProof proof = resolve_proof(source);
  const SettingDistribution sigma = parse_sigma(proof.scenario(), sigma_spec);
  std::vector<double> weights;
  if (against == "best-lr") {
    ProjectOptions options;
    options.tol = 1e-10;
    weights = project(proof, sigma, options).weights;
  } else if (against == "uniform-lr") {
    weights = LocalTheory::uniform(proof.scenario()).weights();
  } else {
    throw CLI::ValidationError("--against", "expected best-lr or uniform-lr");
  }
  const LocalTheory pi(proof.scenario(), weights);
  const std::vector<TrialRecord> records = simulate(proof, sigma, n, seed);
  const EvidenceTrace trace = evidence(records, proof, sigma, pi, history);
  out << evidence_to_json(trace).dump(2) << "\n";
  return 0;
}

int cmd_violation_report(const std::string& source, bool as_json,
                         std::ostream& out) {
  const NonlocalityProof proof = resolve_proof(source);
  const ViolationReport report = violation_report(proof);
  if (as_json) {
    out << violation_to_json(report).dump(2) << "\n";
  } else {
    out << report.inequality << "\n"
        << "lhs: " << fixed10(report.lhs) << "\nrhs: " << fixed10(report.rhs)
        << "\nslack: " << fixed10(report.slack)
        << (report.slack > 0 ? "  (violated)" : "  (satisfied)") << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Statistical strength of nonlocality experiments"};
  app.require_subcommand(1);

  GameOptions game_options;

  std::string source, sigma_spec = "uniform", output, mode = "all";
  std::string against = "best-lr";
  double tol = 1e-9;
  double table_tol = 1e-6;
  bool as_json = false;
  std::int64_t trials = 0, history = 0;
  std::uint64_t seed = 1;
  std::string only_proof;

  CLI::App* export_cmd = app.add_subcommand("export-proof",
                                            "Emit a catalog experiment as JSON");
  export_cmd->add_option("name", source, "catalog name")->required();
  export_cmd->add_option("-o,--output", output, "output file (default stdout)");

  CLI::App* project_cmd = app.add_subcommand(
      "project", "Closest local theory at a fixed setting distribution");
  project_cmd->add_option("proof", source, "catalog name or JSON path")->required();
  project_cmd->add_option("--sigma", sigma_spec, "uniform | product:.. | general:..");
  project_cmd->add_option("--tol", tol, "stationarity residual target");
  project_cmd->add_flag("--json", as_json, "JSON output");

  CLI::App* strength_cmd =
      app.add_subcommand("strength", "Statistical strength of an experiment");
  strength_cmd->add_option("proof", source, "catalog name or JSON path")->required();
  strength_cmd->add_option("--mode", mode, "uniform|uncorrelated|correlated|all");
  strength_cmd->add_flag("--json", as_json, "JSON output");
  strength_cmd->add_option("--seed", game_options.seed, "multistart seed");
  strength_cmd->add_option("--starts", game_options.multistarts,
                           "number of product-game starts");
  strength_cmd->add_option("--threads", game_options.threads,
                           "parallel workers (0 = auto)");

  CLI::App* verify_cmd = app.add_subcommand(
      "verify-paper-table",
      "Recompute the published strength table and report deviations");
  verify_cmd->add_option("--proof", only_proof, "restrict to one experiment");
  verify_cmd->add_option("--tol", table_tol, "pass threshold per entry");
  verify_cmd->add_option("--seed", game_options.seed, "multistart seed");
  verify_cmd->add_option("--threads", game_options.threads,
                         "parallel workers (0 = auto)");

  CLI::App* decompose_cmd = app.add_subcommand(
      "decompose", "Decompose a three-setting table family into deterministic theories");
  decompose_cmd->add_option("gamma", source, "gamma-table JSON path")->required();
  decompose_cmd->add_flag("--json", as_json, "JSON output");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo trials and evidence trace");
  simulate_cmd->add_option("proof", source, "catalog name or JSON path")->required();
  simulate_cmd->add_option("--sigma", sigma_spec, "setting distribution");
  simulate_cmd->add_option("-n,--trials", trials, "trial count")->required();
  simulate_cmd->add_option("--seed", seed, "64-bit stream seed");
  simulate_cmd->add_option("--against", against, "best-lr | uniform-lr");
  simulate_cmd->add_option("--history", history, "record running totals every N trials");

  CLI::App* violation_cmd = app.add_subcommand(
      "violation-report", "Evaluate the matching Bell-type inequality");
  violation_cmd->add_option("proof", source, "catalog name or JSON path")->required();
  violation_cmd->add_flag("--json", as_json, "JSON output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (export_cmd->parsed()) return cmd_export_proof(source, output, out);
    if (project_cmd->parsed()) {
      return cmd_project(source, sigma_spec, tol, as_json, out);
    }
    if (strength_cmd->parsed()) {
      return cmd_strength(source, mode, as_json, game_options, out);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify_paper_table(only_proof, table_tol, game_options, out);
    }
    if (decompose_cmd->parsed()) return cmd_decompose(source, as_json, out);
    if (simulate_cmd->parsed()) {
      return cmd_simulate(source, sigma_spec, trials, seed, against, history, out);
    }
    if (violation_cmd->parsed()) {
      return cmd_violation_report(source, as_json, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  err << "no subcommand\n";
  return kUsageError;
}

}  // namespace bellstrength::cli
