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

#include "bellstrength/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bellstrength {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;
constexpr int kLineSearchMaxIters = 80;
constexpr int kRefreshInterval = 512;  // exact P recompute cadence
}  // namespace

ProofGeometry::ProofGeometry(const NonlocalityProof& proof) : proof_(&proof) {
  const Scenario& sc = proof.scenario();
  n_settings_ = sc.joint_setting_count();
  n_vertices_ = sc.deterministic_count();

  outcome_count_.resize(n_settings_);
  outcome_offset_.resize(n_settings_);
  total_cells_ = 0;
  for (int s = 0; s < n_settings_; ++s) {
    outcome_offset_[s] = total_cells_;
    outcome_count_[s] = sc.outcome_count(s);
    total_cells_ += outcome_count_[s];
  }
  q_flat_.resize(total_cells_);
  for (int s = 0; s < n_settings_; ++s) {
    const ConditionalTable& table = proof.table(s);
    std::copy(table.probs.begin(), table.probs.end(),
              q_flat_.begin() + outcome_offset_[s]);
  }
  // Sub-roundoff entries act as barriers that pin the optimum to the edge of
  // the domain; the solvers treat them as unsupported. The objective shift is
  // below 1e-28 bits.
  for (double& q : q_flat_) {
    if (q < 1e-30) q = 0.0;
  }

  // Outcome cell per (vertex, setting); vertices enumerated by odometer over
  // (party, setting) pairs so the table is filled in canonical vertex order.
  cell_.resize(static_cast<std::size_t>(n_vertices_) * n_settings_);
  std::vector<std::vector<int>> setting_tuples(n_settings_);
  for (int s = 0; s < n_settings_; ++s) {
    setting_tuples[s] = sc.joint_setting_tuple(s);
  }
  std::vector<int> radix(sc.pair_count());
  for (int j = 0; j < sc.parties(); ++j) {
    for (int s = 0; s < sc.settings(j); ++s) {
      radix[sc.pair_index(j, s)] = sc.outcomes(j, s);
    }
  }
  std::vector<int> outcome(sc.pair_count(), 0);
  for (std::int64_t v = 0; v < n_vertices_; ++v) {
    for (int s = 0; s < n_settings_; ++s) {
      int cell = 0;
      for (int j = 0; j < sc.parties(); ++j) {
        const int sj = setting_tuples[s][j];
        cell = cell * sc.outcomes(j, sj) + outcome[sc.pair_index(j, sj)];
      }
      cell_[static_cast<std::size_t>(v) * n_settings_ + s] =
          static_cast<std::int32_t>(cell);
    }
    for (int p = sc.pair_count() - 1; p >= 0; --p) {
      if (++outcome[p] < radix[p]) break;
      outcome[p] = 0;
    }
  }
}

void ProofGeometry::induced_flat(const std::vector<double>& weights,
                                 std::vector<double>* out) const {
  out->assign(total_cells_, 0.0);
  for (std::int64_t v = 0; v < n_vertices_; ++v) {
    const double w = weights[static_cast<std::size_t>(v)];
    if (w == 0.0) continue;
    const std::int32_t* row = &cell_[static_cast<std::size_t>(v) * n_settings_];
    for (int s = 0; s < n_settings_; ++s) {
      (*out)[outcome_offset_[s] + row[s]] += w;
    }
  }
}

std::vector<double> ProofGeometry::divergences_from_flat(
    const std::vector<double>& p_flat) const {
  std::vector<double> out(n_settings_, 0.0);
  for (int s = 0; s < n_settings_; ++s) {
    double bits = 0.0;
    for (int z = 0; z < outcome_count_[s]; ++z) {
      const double q = q_flat_[outcome_offset_[s] + z];
      if (q <= 0.0) continue;
      const double p = p_flat[outcome_offset_[s] + z];
      if (p <= 0.0) {
        bits = kInf;
        break;
      }
      bits += q * std::log2(q / p);
    }
    out[s] = bits;
  }
  return out;
}

void ProofGeometry::vertex_scores(const std::vector<double>& sigma,
                                  const std::vector<double>& p_flat,
                                  std::vector<double>* scores) const {
  // ratio(s,z) = sigma_s q / P, zero where q = 0; infinite where P = 0 < q.
  std::vector<double> ratio(total_cells_, 0.0);
  for (int s = 0; s < n_settings_; ++s) {
    if (sigma[s] == 0.0) continue;
    for (int z = 0; z < outcome_count_[s]; ++z) {
      const int i = outcome_offset_[s] + z;
      if (q_flat_[i] <= 0.0) continue;
      ratio[i] = p_flat[i] > 0.0 ? sigma[s] * q_flat_[i] / p_flat[i] : kInf;
    }
  }
  scores->assign(static_cast<std::size_t>(n_vertices_), 0.0);
  for (std::int64_t v = 0; v < n_vertices_; ++v) {
    const std::int32_t* row = &cell_[static_cast<std::size_t>(v) * n_settings_];
    double total = 0.0;
    for (int s = 0; s < n_settings_; ++s) {
      total += ratio[outcome_offset_[s] + row[s]];
    }
    (*scores)[static_cast<std::size_t>(v)] = total;
  }
}

void ProofGeometry::vertex_setting_scores(const std::vector<double>& p_flat,
                                          int s,
                                          std::vector<double>* scores) const {
  scores->assign(static_cast<std::size_t>(n_vertices_), 0.0);
  for (std::int64_t v = 0; v < n_vertices_; ++v) {
    const int i = outcome_offset_[s] +
                  cell_[static_cast<std::size_t>(v) * n_settings_ + s];
    if (q_flat_[i] <= 0.0) continue;
    (*scores)[static_cast<std::size_t>(v)] =
        p_flat[i] > 0.0 ? q_flat_[i] / p_flat[i] : kInf;
  }
}

std::vector<ConditionalTable> ProofGeometry::tables_from_flat(
    const std::vector<double>& p_flat) const {
  std::vector<ConditionalTable> tables(n_settings_);
  for (int s = 0; s < n_settings_; ++s) {
    tables[s].setting = proof_->scenario().joint_setting_tuple(s);
    tables[s].probs.assign(p_flat.begin() + outcome_offset_[s],
                           p_flat.begin() + outcome_offset_[s] + outcome_count_[s]);
  }
  return tables;
}

namespace {

// State of one descent run.
struct Iterate {
  std::vector<double> pi;
  std::vector<double> p_flat;
};

double objective_bits_flat(const ProofGeometry& g,
                           const std::vector<double>& sigma,
                           const std::vector<double>& p_flat) {
  double bits = 0.0;
  for (int s = 0; s < g.settings(); ++s) {
    if (sigma[s] == 0.0) continue;
    double d = 0.0;
    for (int z = 0; z < g.outcome_count(s); ++z) {
      const int i = g.outcome_offset(s) + z;
      const double q = g.q_flat()[i];
      if (q <= 0.0) continue;
      if (p_flat[i] <= 0.0) return kInf;
      d += q * std::log2(q / p_flat[i]);
    }
    bits += sigma[s] * d;
  }
  return bits;
}

// Derivative of the objective along p_flat + gamma * delta at the given gamma,
// in nats (sign is all the line search needs). Returns +inf past the domain.
double directional_derivative(const ProofGeometry& g,
                              const std::vector<double>& sigma,
                              const std::vector<double>& p_flat,
                              const std::vector<double>& delta, double gamma) {
  double deriv = 0.0;
  bool down_barrier = false;
  for (int s = 0; s < g.settings(); ++s) {
    if (sigma[s] == 0.0) continue;
    for (int z = 0; z < g.outcome_count(s); ++z) {
      const int i = g.outcome_offset(s) + z;
      const double q = g.q_flat()[i];
      if (q <= 0.0) continue;
      const double denom = p_flat[i] + gamma * delta[i];
      if (denom <= 1e-300) {
        // At the barrier: moving further in shrinks the objective without
        // bound unless this cell is filling up, in which case the point is
        // past the domain.
        if (delta[i] > 0.0) {
          down_barrier = true;
          continue;
        }
        return kInf;
      }
      deriv -= sigma[s] * q * delta[i] / denom;
    }
  }
  return down_barrier ? -kInf : deriv;
}

// Exact line search: minimizes the convex restriction over [0, gamma_max] by
// bisecting the sign of its derivative.
double line_search(const ProofGeometry& g, const std::vector<double>& sigma,
                   const std::vector<double>& p_flat,
                   const std::vector<double>& delta, double gamma_max) {
  const double d_end = directional_derivative(g, sigma, p_flat, delta, gamma_max);
  if (d_end <= 0.0) return gamma_max;
  double lo = 0.0, hi = gamma_max;
  for (int it = 0; it < kLineSearchMaxIters && hi - lo > 1e-18 * gamma_max; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (directional_derivative(g, sigma, p_flat, delta, mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void renormalize(std::vector<double>* pi) {
  double sum = 0.0;
  for (double w : *pi) sum += w;
  for (double& w : *pi) w /= sum;
}

}  // namespace

InnerSolver::InnerSolver(const NonlocalityProof& proof) : geometry_(proof) {}

ProjectionResult InnerSolver::solve(const std::vector<double>& sigma,
                                    const ProjectOptions& options) const {
  const ProofGeometry& g = geometry_;
  if (static_cast<int>(sigma.size()) != g.settings()) {
    throw std::invalid_argument("solve: sigma has wrong length");
  }
  if (!(options.tol > 0.0)) {
    throw std::invalid_argument("solve: tolerance must be positive");
  }
  const std::size_t V = static_cast<std::size_t>(g.vertices());

  Iterate it;
  if (options.initial_weights != nullptr) {
    if (options.initial_weights->size() != V) {
      throw std::invalid_argument("solve: initial weights have wrong length");
    }
    it.pi = *options.initial_weights;
  } else {
    it.pi.assign(V, 1.0 / static_cast<double>(V));
  }
  g.induced_flat(it.pi, &it.p_flat);

  // A start that hides some sampled outcome has infinite objective; mix with
  // uniform until finite, which cannot raise the eventual optimum.
  for (int guard = 0;
       std::isinf(objective_bits_flat(g, sigma, it.p_flat)) && guard < 80;
       ++guard) {
    for (double& w : it.pi) w = 0.5 * w + 0.5 / static_cast<double>(V);
    g.induced_flat(it.pi, &it.p_flat);
  }

  std::vector<double> scores;
  std::vector<double> delta(g.total_cells());
  ProjectionResult result;
  long iter = 0;

  // Multiplicative warm-up: rescaling each weight by its stationarity score
  // is the fixed-point iteration of this likelihood problem and descends
  // monotonically at the cost of one score pass. It covers the easy distance;
  // the vertex-direction phase below certifies the tail.
  {
    double previous = objective_bits_flat(g, sigma, it.p_flat);
    for (int sweep = 0; sweep < 2000; ++sweep) {
      g.vertex_scores(sigma, it.p_flat, &scores);
      bool usable = true;
      double residual = 0.0;
      for (std::int64_t v = 0; v < g.vertices(); ++v) {
        const double sc = scores[static_cast<std::size_t>(v)];
        if (!std::isfinite(sc)) {
          usable = false;
          break;
        }
        residual = std::max(residual, std::abs(sc - 1.0));
      }
      // Hand the slow tail to the vertex phase.
      if (!usable || residual <= 1e-4) break;
      for (std::int64_t v = 0; v < g.vertices(); ++v) {
        it.pi[static_cast<std::size_t>(v)] *= scores[static_cast<std::size_t>(v)];
      }
      renormalize(&it.pi);
      g.induced_flat(it.pi, &it.p_flat);
      if (options.objective_trace != nullptr) {
        options.objective_trace->push_back(objective_bits_flat(g, sigma, it.p_flat));
      }
      if (sweep % 8 == 7) {
        const double current = objective_bits_flat(g, sigma, it.p_flat);
        if (previous - current < 1e-13) break;
        previous = current;
      }
    }
  }

  while (true) {
    if (iter % kRefreshInterval == 0) {
      renormalize(&it.pi);
      g.induced_flat(it.pi, &it.p_flat);
    }
    g.vertex_scores(sigma, it.p_flat, &scores);

    std::int64_t toward = -1, away = -1;
    double best_score = -kInf, worst_supported = kInf;
    for (std::int64_t v = 0; v < g.vertices(); ++v) {
      const double sc = scores[static_cast<std::size_t>(v)];
      if (sc > best_score) {
        best_score = sc;
        toward = v;
      }
      if (it.pi[static_cast<std::size_t>(v)] > 0.0 && sc < worst_supported) {
        worst_supported = sc;
        away = v;
      }
    }
    const double gap_toward = best_score - 1.0;
    const double gap_away = 1.0 - worst_supported;
    const double residual = std::max({gap_toward, gap_away, 0.0});

    if (options.objective_trace != nullptr) {
      options.objective_trace->push_back(objective_bits_flat(g, sigma, it.p_flat));
    }

    if (residual <= options.tol) {
      // Certify against an exactly recomputed induced vector.
      renormalize(&it.pi);
      g.induced_flat(it.pi, &it.p_flat);
      g.vertex_scores(sigma, it.p_flat, &scores);
      double certified = 0.0;
      for (std::int64_t v = 0; v < g.vertices(); ++v) {
        const double sc = scores[static_cast<std::size_t>(v)];
        const double excess =
            it.pi[static_cast<std::size_t>(v)] > 0.0 ? std::abs(sc - 1.0)
                                                     : std::max(sc - 1.0, 0.0);
        certified = std::max(certified, excess);
      }
      if (certified <= options.tol) {
        result.converged = true;
        result.kkt_residual = certified;
        break;
      }
    }
    if (iter >= options.max_iterations) {
      result.converged = false;
      result.kkt_residual = residual;
      break;
    }
    ++iter;

    // Mass moves straight from the worst supported vertex to the best one
    // when both ends are available (the step that clears support-transfer
    // tails); otherwise fall back to a plain toward or away move.
    enum class Move { kPairwise, kToward, kAway };
    Move move;
    if (gap_toward > 0.0 && gap_away > 0.0 && toward != away) {
      move = Move::kPairwise;
    } else if (gap_toward >= gap_away) {
      move = Move::kToward;
    } else {
      move = Move::kAway;
    }

    double gamma_max;
    std::fill(delta.begin(), delta.end(), 0.0);
    if (move == Move::kPairwise) {
      gamma_max = it.pi[static_cast<std::size_t>(away)];
      for (int s = 0; s < g.settings(); ++s) {
        delta[g.outcome_offset(s) + g.cell(toward, s)] += 1.0;
        delta[g.outcome_offset(s) + g.cell(away, s)] -= 1.0;
      }
    } else if (move == Move::kToward) {
      gamma_max = 1.0;
      for (int i = 0; i < g.total_cells(); ++i) delta[i] = -it.p_flat[i];
      for (int s = 0; s < g.settings(); ++s) {
        delta[g.outcome_offset(s) + g.cell(toward, s)] += 1.0;
      }
    } else {
      const double w = it.pi[static_cast<std::size_t>(away)];
      if (w >= 1.0) break;  // lone vertex; nothing to move away from
      gamma_max = w / (1.0 - w);
      for (int i = 0; i < g.total_cells(); ++i) delta[i] = it.p_flat[i];
      for (int s = 0; s < g.settings(); ++s) {
        delta[g.outcome_offset(s) + g.cell(away, s)] -= 1.0;
      }
    }
    if (gamma_max <= 0.0) continue;

    const double gamma = line_search(g, sigma, it.p_flat, delta, gamma_max);
    if (gamma <= 0.0) continue;

    if (move == Move::kPairwise) {
      it.pi[static_cast<std::size_t>(toward)] += gamma;
      double& wa = it.pi[static_cast<std::size_t>(away)];
      wa -= gamma;
      if (gamma >= gamma_max || wa < 1e-17) wa = 0.0;
    } else if (move == Move::kToward) {
      for (double& w : it.pi) w *= (1.0 - gamma);
      it.pi[static_cast<std::size_t>(toward)] += gamma;
    } else {
      for (double& w : it.pi) w *= (1.0 + gamma);
      double& wa = it.pi[static_cast<std::size_t>(away)];
      wa -= gamma;
      // A full away step removes the pivot from the support exactly.
      if (gamma >= gamma_max || wa < 1e-17) wa = 0.0;
    }
    for (int i = 0; i < g.total_cells(); ++i) {
      it.p_flat[i] += gamma * delta[i];
      if (it.p_flat[i] < 0.0) it.p_flat[i] = 0.0;
    }
  }

  renormalize(&it.pi);
  g.induced_flat(it.pi, &it.p_flat);
  result.value_bits = objective_bits_flat(g, sigma, it.p_flat);
  result.weights = std::move(it.pi);
  result.iterations = iter;
  result.induced = g.tables_from_flat(it.p_flat);
  return result;
}

ProjectionResult project(const NonlocalityProof& proof,
                         const SettingDistribution& sigma,
                         const ProjectOptions& options) {
  return InnerSolver(proof).solve(sigma.probs(), options);
}

ProjectionResult project(const NonlocalityProof& proof,
                         const SettingDistribution& sigma, double tol) {
  ProjectOptions options;
  options.tol = tol;
  return project(proof, sigma, options);
}

KktReport kkt_check(const ProofGeometry& geometry,
                    const std::vector<double>& sigma,
                    const std::vector<double>& weights) {
  KktReport report;
  std::vector<double> p_flat;
  geometry.induced_flat(weights, &p_flat);
  geometry.vertex_scores(sigma, p_flat, &report.scores);
  for (std::int64_t v = 0; v < geometry.vertices(); ++v) {
    const double sc = report.scores[static_cast<std::size_t>(v)];
    if (std::isinf(sc)) {
      report.absolutely_continuous = false;
      report.residual = kInf;
      return report;
    }
    const double excess = weights[static_cast<std::size_t>(v)] > 0.0
                              ? std::abs(sc - 1.0)
                              : std::max(sc - 1.0, 0.0);
    report.residual = std::max(report.residual, excess);
  }
  return report;
}

KktReport kkt_check(const NonlocalityProof& proof,
                    const SettingDistribution& sigma, const LocalTheory& pi) {
  ProofGeometry geometry(proof);
  return kkt_check(geometry, sigma.probs(), pi.weights());
}

}  // namespace bellstrength
