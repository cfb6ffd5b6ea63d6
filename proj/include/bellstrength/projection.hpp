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
#include <vector>

#include "bellstrength/proof.hpp"

namespace bellstrength {

// Flattened geometry of a proof shared by the solvers: the experiment's
// conditional probabilities and, for every deterministic theory, the outcome
// cell it selects at each joint setting.
class ProofGeometry {
 public:
  explicit ProofGeometry(const NonlocalityProof& proof);

  const NonlocalityProof& proof() const { return *proof_; }
  int settings() const { return n_settings_; }
  std::int64_t vertices() const { return n_vertices_; }

  int outcome_count(int s) const { return outcome_count_[s]; }
  int outcome_offset(int s) const { return outcome_offset_[s]; }
  int total_cells() const { return total_cells_; }

  // Outcome cell chosen by vertex v at joint setting s (local index).
  int cell(std::int64_t v, int s) const {
    return cell_[static_cast<std::size_t>(v) * n_settings_ + s];
  }

  // Experiment probabilities, flattened with outcome_offset.
  const std::vector<double>& q_flat() const { return q_flat_; }

  // Induced probabilities P_{s;pi}, flattened; `out` is resized.
  void induced_flat(const std::vector<double>& weights,
                    std::vector<double>* out) const;

  // D(Q_s || P_s) per setting from a flat induced vector.
  std::vector<double> divergences_from_flat(const std::vector<double>& p_flat) const;

  // Stationarity scores: score(v) = sum_s sigma_s q_s(cell(v,s)) / P_s(cell(v,s)),
  // with q=0 cells contributing nothing. Equals 1 in expectation under pi.
  void vertex_scores(const std::vector<double>& sigma,
                     const std::vector<double>& p_flat,
                     std::vector<double>* scores) const;

  // Per-setting scores score_s(v) = q_s(cell(v,s)) / P_s(cell(v,s)); used by
  // solvers needing gradients of individual setting divergences.
  void vertex_setting_scores(const std::vector<double>& p_flat, int s,
                             std::vector<double>* scores) const;

  std::vector<ConditionalTable> tables_from_flat(
      const std::vector<double>& p_flat) const;

 private:
  const NonlocalityProof* proof_;
  int n_settings_;
  std::int64_t n_vertices_;
  int total_cells_;
  std::vector<int> outcome_count_;
  std::vector<int> outcome_offset_;
  std::vector<double> q_flat_;
  std::vector<std::int32_t> cell_;
};

struct ProjectionResult {
  double value_bits = 0.0;
  std::vector<double> weights;  // optimal local theory
  double kkt_residual = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<ConditionalTable> induced;
};

struct ProjectOptions {
  double tol = 1e-9;            // KKT residual target
  long max_iterations = 1000000;
  const std::vector<double>* initial_weights = nullptr;  // default: uniform
  std::vector<double>* objective_trace = nullptr;        // test hook
};

// Minimizer of the weighted divergence over the local polytope at a fixed
// setting distribution. The iterate moves along deterministic-theory vertex
// directions (toward the best vertex or away from the worst supported one)
// with an exact line search on each one-dimensional restriction, and stops
// when the stationarity residual certifies the optimum:
//   value(pi) - optimum <= residual / ln 2.
class InnerSolver {
 public:
  explicit InnerSolver(const NonlocalityProof& proof);

  const ProofGeometry& geometry() const { return geometry_; }
  const NonlocalityProof& proof() const { return geometry_.proof(); }

  ProjectionResult solve(const std::vector<double>& sigma,
                         const ProjectOptions& options = {}) const;

 private:
  ProofGeometry geometry_;
};

// The information projection of the experiment onto the local polytope.
ProjectionResult project(const NonlocalityProof& proof,
                         const SettingDistribution& sigma,
                         const ProjectOptions& options = {});
ProjectionResult project(const NonlocalityProof& proof,
                         const SettingDistribution& sigma, double tol);

struct KktReport {
  std::vector<double> scores;  // per-vertex stationarity sums
  double residual = 0.0;       // max(|score-1| on support, (score-1)+ off it)
  bool absolutely_continuous = true;  // false if P=0 somewhere Q>0 (weighted)
};

// Checks the optimality conditions of the inner problem for a given local
// theory: scores equal 1 on the support and at most 1 elsewhere at an exact
// optimum. Scores are infinite when the theory is not absolutely continuous
// with respect to the experiment on the sampled settings.
KktReport kkt_check(const NonlocalityProof& proof,
                    const SettingDistribution& sigma, const LocalTheory& pi);
KktReport kkt_check(const ProofGeometry& geometry,
                    const std::vector<double>& sigma,
                    const std::vector<double>& weights);

}  // namespace bellstrength
