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

#include "bellstrength/games.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "bellstrength/divergence.hpp"
#include "bellstrength/rng.hpp"

namespace bellstrength {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BELLSTRENGTH_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; all results are
// collected before returning so merging stays deterministic.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&fn, w, n, threads]() {
      for (int i = w; i < n; i += threads) fn(i);
    }));
  }
  for (auto& worker : workers) worker.get();
}

struct InnerEval {
  double value = 0.0;
  std::vector<double> grad;  // per-setting divergences at the projection
  std::vector<double> pi;
  double kkt_residual = 0.0;
  bool converged = false;
  std::vector<ConditionalTable> induced;
};

// Inner solves along an outer trajectory, warm-started from the previous
// optimum.
class WarmSolver {
 public:
  WarmSolver(const InnerSolver& solver, double tol,
             long max_iterations = 1000000)
      : solver_(solver), tol_(tol), max_iterations_(max_iterations) {}

  void set_tol(double tol) { tol_ = tol; }
  double tol() const { return tol_; }

  InnerEval eval(const std::vector<double>& sigma) {
    ProjectOptions options;
    options.tol = tol_;
    options.max_iterations = max_iterations_;
    if (!warm_.empty()) options.initial_weights = &warm_;
    ProjectionResult res = solver_.solve(sigma, options);
    warm_ = res.weights;
    InnerEval eval;
    eval.value = res.value_bits;
    eval.grad = per_setting_divergences(solver_.proof(), res.induced);
    eval.pi = std::move(res.weights);
    eval.kkt_residual = res.kkt_residual;
    eval.converged = res.converged;
    eval.induced = std::move(res.induced);
    return eval;
  }

  void reset() { warm_.clear(); }

 private:
  const InnerSolver& solver_;
  double tol_;
  long max_iterations_;
  std::vector<double> warm_;
};

// Direction ranking tolerates infinite divergences (possible at settings the
// current distribution ignores); the line search decides what is real.
double ranked(double g) { return std::isfinite(g) ? g : 1e9; }

std::vector<double> clipped_simplex(std::vector<double> v) {
  double sum = 0.0;
  for (double& x : v) {
    if (x < 1e-15) x = 0.0;
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

// Derivative of the concave outer value along sigma + gamma*d, from the
// envelope theorem: the supergradient is the per-setting divergence vector.
double outer_derivative(WarmSolver& inner, const std::vector<double>& sigma,
                        const std::vector<double>& d, double gamma) {
  std::vector<double> point(sigma.size());
  for (std::size_t s = 0; s < sigma.size(); ++s) {
    point[s] = sigma[s] + gamma * d[s];
  }
  const InnerEval eval = inner.eval(clipped_simplex(std::move(point)));
  double deriv = 0.0;
  for (std::size_t s = 0; s < sigma.size(); ++s) {
    if (d[s] == 0.0) continue;
    const double g = eval.grad[s];
    if (!std::isfinite(g)) return d[s] > 0.0 ? kInf : -kInf;
    deriv += d[s] * g;
  }
  return deriv;
}

// Maximizing line search over [0, gamma_max] by bisecting the derivative.
double outer_line_search(WarmSolver& inner, const std::vector<double>& sigma,
                         const std::vector<double>& d, double gamma_max) {
  if (outer_derivative(inner, sigma, d, gamma_max) >= 0.0) return gamma_max;
  double lo = 0.0, hi = gamma_max;
  for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, gamma_max); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (outer_derivative(inner, sigma, d, mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Solves J x = b in place by Gaussian elimination with partial pivoting.
bool solve_linear(std::vector<std::vector<double>> J, std::vector<double> b,
                  std::vector<double>* x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(J[r][col]) > std::abs(J[pivot][col])) pivot = r;
    }
    if (std::abs(J[pivot][col]) < 1e-14) return false;
    std::swap(J[pivot], J[col]);
    std::swap(b[pivot], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = J[r][col] / J[col][col];
      for (int c = col; c < n; ++c) J[r][c] -= f * J[col][c];
      b[r] -= f * b[col];
    }
  }
  x->assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= J[r][c] * (*x)[c];
    (*x)[r] = acc / J[r][r];
  }
  return true;
}

// Equalizing polish: at an optimum interior to its support face, the
// per-setting divergences coincide there. Solves that system in softmax
// coordinates with a damped finite-difference Newton method and keeps the
// best value seen. Returns the refined sigma.
std::vector<double> newton_equalize(const InnerSolver& solver,
                                    std::vector<double> sigma,
                                    const GameOptions& options) {
  const int n_settings = static_cast<int>(sigma.size());
  std::vector<int> support;
  for (int s = 0; s < n_settings; ++s) {
    if (sigma[s] > 0.0) support.push_back(s);
  }
  const int m = static_cast<int>(support.size());
  if (m < 2) return sigma;

  WarmSolver inner(solver, options.polish_inner_tol);
  auto expand = [&](const std::vector<double>& theta) {
    std::vector<double> full(n_settings, 0.0);
    double z = 0.0;
    for (int i = 0; i < m; ++i) z += std::exp(theta[i]);
    for (int i = 0; i < m; ++i) full[support[i]] = std::exp(theta[i]) / z;
    return full;
  };
  auto residual_at = [&](const std::vector<double>& theta, double* value) {
    const InnerEval eval = inner.eval(expand(theta));
    if (value != nullptr) *value = eval.value;
    std::vector<double> F(m - 1);
    for (int i = 1; i < m; ++i) {
      F[i - 1] = eval.grad[support[i]] - eval.grad[support[0]];
    }
    return F;
  };

  std::vector<double> theta(m, 0.0);
  for (int i = 0; i < m; ++i) {
    theta[i] = std::log(std::max(sigma[support[i]], 1e-13));
  }
  const double theta0 = theta[0];
  for (double& t : theta) t -= theta0;

  double best_value = -kInf;
  std::vector<double> best_sigma = sigma;
  double value = 0.0;
  std::vector<double> F = residual_at(theta, &value);
  if (value > best_value) {
    best_value = value;
    best_sigma = expand(theta);
  }
  auto norm_inf = [](const std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
  };

  const double fd_step = 1e-5;
  for (int round = 0; round < 30 && norm_inf(F) > 1e-10; ++round) {
    // Finite-difference Jacobian in the gauge theta[0] = 0.
    std::vector<std::vector<double>> J(m - 1, std::vector<double>(m - 1));
    for (int col = 1; col < m; ++col) {
      std::vector<double> shifted = theta;
      shifted[col] += fd_step;
      const std::vector<double> Fp = residual_at(shifted, nullptr);
      for (int r = 0; r < m - 1; ++r) J[r][col - 1] = (Fp[r] - F[r]) / fd_step;
    }
    std::vector<double> step;
    std::vector<double> rhs(m - 1);
    for (int r = 0; r < m - 1; ++r) rhs[r] = -F[r];
    if (!solve_linear(J, rhs, &step)) break;

    bool accepted = false;
    for (double damping = 1.0; damping > 1e-6; damping *= 0.5) {
      std::vector<double> trial = theta;
      bool in_range = true;
      for (int i = 1; i < m; ++i) {
        trial[i] += damping * step[i - 1];
        if (std::abs(trial[i]) > 40.0) in_range = false;
      }
      if (!in_range) continue;
      double trial_value = 0.0;
      const std::vector<double> Ft = residual_at(trial, &trial_value);
      if (norm_inf(Ft) < norm_inf(F)) {
        theta = trial;
        F = Ft;
        if (trial_value > best_value) {
          best_value = trial_value;
          best_sigma = expand(theta);
        }
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (norm_inf(F) <= 1e-8) {
    // Equalized point; prefer it even if the tracked value ties.
    return expand(theta);
  }
  return best_sigma;
}

// Entropic ascent from the uniform distribution: multiplicative reweighting
// by the supergradient keeps every setting strictly sampled, so the final
// projection pins all settings and its worst-setting divergence certifies the
// game value. Input symmetries are preserved, which steers toward the most
// interior optimum.
InnerEval mirror_interior(const InnerSolver& solver, std::vector<double>* sigma,
                          const GameOptions& options) {
  const int S = solver.geometry().settings();
  WarmSolver inner(solver, options.inner_tol);
  sigma->assign(S, 1.0 / S);
  InnerEval eval = inner.eval(*sigma);
  double eta = 0.5;
  for (int it = 0; it < 800; ++it) {
    double gap = 0.0;
    for (int s = 0; s < S; ++s) {
      gap = std::max(gap, ranked(eval.grad[s]) - eval.value);
    }
    if (gap <= 5e-8 || eta < 1e-7) break;
    std::vector<double> trial(S);
    double norm = 0.0;
    for (int s = 0; s < S; ++s) {
      const double drift = std::min(ranked(eval.grad[s]) - eval.value, 1e3);
      trial[s] = (*sigma)[s] * std::exp(std::clamp(eta * drift / std::max(gap, 1e-12), -40.0, 40.0));
      norm += trial[s];
    }
    for (double& x : trial) x /= norm;
    const InnerEval trial_eval = inner.eval(trial);
    if (trial_eval.value >= eval.value - 1e-15) {
      *sigma = std::move(trial);
      eval = trial_eval;
      eta *= 1.25;
    } else {
      eta *= 0.5;
    }
  }
  inner.set_tol(options.polish_inner_tol);
  eval = inner.eval(*sigma);
  return eval;
}

std::vector<double> divergences_of(const ProofGeometry& geometry,
                                   const std::vector<double>& weights) {
  std::vector<double> p_flat;
  geometry.induced_flat(weights, &p_flat);
  return geometry.divergences_from_flat(p_flat);
}

double worst_setting(const std::vector<double>& divergences) {
  double worst = 0.0;
  for (double g : divergences) worst = std::max(worst, g);
  return worst;
}

// Minimizes the excess of the worst setting over `target` by descending
// sum_s max(U_s - target, 0)^2 along vertex directions. Feasible points
// (worst setting <= target) end the search. Returns the best weights found.
std::vector<double> dual_feasibility_polish(const ProofGeometry& g,
                                            std::vector<double> pi,
                                            double target, long max_iters) {
  const std::size_t V = static_cast<std::size_t>(g.vertices());
  const int S = g.settings();
  if (pi.empty()) pi.assign(V, 1.0 / static_cast<double>(V));
  std::vector<double> p_flat;
  g.induced_flat(pi, &p_flat);
  for (int guard = 0; guard < 80; ++guard) {
    if (std::isfinite(worst_setting(g.divergences_from_flat(p_flat)))) break;
    for (double& w : pi) w = 0.5 * w + 0.5 / static_cast<double>(V);
    g.induced_flat(pi, &p_flat);
  }

  std::vector<double> best_pi = pi;
  double best_worst = worst_setting(g.divergences_from_flat(p_flat));
  std::vector<double> score, grad(V), delta(g.total_cells());

  for (long iter = 0; iter < max_iters; ++iter) {
    const std::vector<double> div = g.divergences_from_flat(p_flat);
    const double worst = worst_setting(div);
    if (worst < best_worst) {
      best_worst = worst;
      best_pi = pi;
    }
    if (worst <= target) break;

    std::fill(grad.begin(), grad.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      const double h = div[s] - target;
      if (h <= 0.0) continue;
      g.vertex_setting_scores(p_flat, s, &score);
      const double coeff = 2.0 * h / kLn2;
      for (std::size_t v = 0; v < V; ++v) grad[v] -= coeff * score[v];
    }
    std::size_t toward = 0, away = 0;
    double toward_val = kInf, away_val = -kInf;
    double pivot_dot = 0.0;
    for (std::size_t v = 0; v < V; ++v) {
      pivot_dot += pi[v] * grad[v];
      if (grad[v] < toward_val) {
        toward_val = grad[v];
        toward = v;
      }
      if (pi[v] > 0.0 && grad[v] > away_val) {
        away_val = grad[v];
        away = v;
      }
    }
    const double gap_toward = pivot_dot - toward_val;
    const double gap_away = away_val - pivot_dot;
    if (std::max(gap_toward, gap_away) <= 1e-18) break;

    const bool move_toward = gap_toward >= gap_away;
    const std::size_t pivot = move_toward ? toward : away;
    double gamma_max = 1.0;
    if (move_toward) {
      for (int i = 0; i < g.total_cells(); ++i) delta[i] = -p_flat[i];
      for (int s = 0; s < S; ++s) {
        delta[g.outcome_offset(s) + g.cell(static_cast<std::int64_t>(pivot), s)] += 1.0;
      }
    } else {
      const double w = pi[pivot];
      if (w >= 1.0) break;
      gamma_max = w / (1.0 - w);
      for (int i = 0; i < g.total_cells(); ++i) delta[i] = p_flat[i];
      for (int s = 0; s < S; ++s) {
        delta[g.outcome_offset(s) + g.cell(static_cast<std::int64_t>(pivot), s)] -= 1.0;
      }
    }

    // Derivative of the penalty along the move.
    auto penalty_derivative = [&](double gamma) {
      double deriv = 0.0;
      for (int s = 0; s < S; ++s) {
        double u = 0.0, du = 0.0;
        bool infinite = false;
        for (int z = 0; z < g.outcome_count(s); ++z) {
          const int i = g.outcome_offset(s) + z;
          const double q = g.q_flat()[i];
          if (q <= 0.0) continue;
          const double denom = p_flat[i] + gamma * delta[i];
          if (denom <= 1e-300) {
            infinite = true;
            break;
          }
          u += q * std::log2(q / denom);
          du -= q * delta[i] / denom;
        }
        if (infinite) return kInf;
        const double h = u - target;
        if (h > 0.0) deriv += 2.0 * h * du / kLn2;
      }
      return deriv;
    };
    double gamma = gamma_max;
    if (penalty_derivative(gamma_max) > 0.0) {
      double lo = 0.0, hi = gamma_max;
      for (int it = 0; it < 80 && hi - lo > 1e-18 * gamma_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (penalty_derivative(mid) <= 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      gamma = 0.5 * (lo + hi);
    }
    if (gamma <= 0.0) break;

    if (move_toward) {
      for (double& w : pi) w *= (1.0 - gamma);
      pi[pivot] += gamma;
    } else {
      for (double& w : pi) w *= (1.0 + gamma);
      pi[pivot] -= gamma;
      if (gamma >= gamma_max || pi[pivot] < 1e-17) pi[pivot] = 0.0;
    }
    if (iter % 256 == 255) {
      g.induced_flat(pi, &p_flat);
    } else {
      for (int i = 0; i < g.total_cells(); ++i) {
        p_flat[i] = std::max(p_flat[i] + gamma * delta[i], 0.0);
      }
    }
  }
  const std::vector<double> final_div = divergences_of(g, pi);
  if (worst_setting(final_div) < best_worst) best_pi = pi;
  return best_pi;
}

StrengthResult make_result(const NonlocalityProof& proof, StrengthMode mode,
                           SettingDistribution sigma, const InnerEval& eval) {
  StrengthResult result;
  result.mode = mode;
  result.strength_bits = eval.value;
  result.sigma_star = std::move(sigma);
  result.pi_star = eval.pi;
  result.kkt_residual = eval.kkt_residual;
  result.converged = eval.converged;
  result.best_classical = eval.induced;
  return result;
}

}  // namespace

const char* to_string(StrengthMode mode) {
  switch (mode) {
    case StrengthMode::kUniform: return "uniform";
    case StrengthMode::kUncorrelated: return "uncorrelated";
    case StrengthMode::kCorrelated: return "correlated";
  }
  return "?";
}

StrengthResult strength_uniform(const NonlocalityProof& proof,
                                const GameOptions& options) {
  InnerSolver solver(proof);
  WarmSolver inner(solver, options.polish_inner_tol);
  SettingDistribution sigma = SettingDistribution::uniform(proof.scenario());
  const InnerEval eval = inner.eval(sigma.probs());
  return make_result(proof, StrengthMode::kUniform, std::move(sigma), eval);
}

StrengthResult strength_correlated(const NonlocalityProof& proof,
                                   const GameOptions& options) {
  InnerSolver solver(proof);
  const int S = proof.scenario().joint_setting_count();
  WarmSolver inner(solver, options.inner_tol);

  std::vector<double> sigma(S, 1.0 / S);
  InnerEval eval = inner.eval(sigma);

  // Direction key: setting index, negative-offset for away moves.
  std::set<int> blocked;
  const auto toward_key = [](int s) { return s + 1; };
  const auto away_key = [](int s) { return -(s + 1); };

  for (int iter = 0; iter < options.max_outer_iterations; ++iter) {
    int best_dir = 0;
    double best_gap = 0.0;
    bool best_toward = true;
    for (int s = 0; s < S; ++s) {
      const double g = ranked(eval.grad[s]);
      const double gap_toward = g - eval.value;
      if (gap_toward > best_gap && blocked.find(toward_key(s)) == blocked.end()) {
        best_gap = gap_toward;
        best_dir = s;
        best_toward = true;
      }
      if (sigma[s] > 0.0) {
        const double gap_away = eval.value - g;
        if (gap_away > best_gap && blocked.find(away_key(s)) == blocked.end()) {
          best_gap = gap_away;
          best_dir = s;
          best_toward = false;
        }
      }
    }
    if (best_gap <= options.outer_gap_tol) break;

    std::vector<double> d(S);
    double gamma_max;
    if (best_toward) {
      for (int s = 0; s < S; ++s) d[s] = -sigma[s];
      d[best_dir] += 1.0;
      gamma_max = 1.0;
    } else {
      const double w = sigma[best_dir];
      if (w >= 1.0) break;
      for (int s = 0; s < S; ++s) d[s] = sigma[s];
      d[best_dir] -= 1.0;
      gamma_max = w / (1.0 - w);
    }
    const double gamma = outer_line_search(inner, sigma, d, gamma_max);
    if (gamma <= 1e-13) {
      blocked.insert(best_toward ? toward_key(best_dir) : away_key(best_dir));
      eval = inner.eval(sigma);
      continue;
    }
    for (int s = 0; s < S; ++s) sigma[s] += gamma * d[s];
    if (!best_toward && gamma >= gamma_max) sigma[best_dir] = 0.0;
    sigma = clipped_simplex(std::move(sigma));
    blocked.clear();
    eval = inner.eval(sigma);
  }

  // Sharpen on the support face, then recompute with the tight tolerance.
  sigma = clipped_simplex(newton_equalize(solver, sigma, options));
  WarmSolver tight(solver, options.polish_inner_tol);
  eval = tight.eval(sigma);

  StrengthResult result =
      make_result(proof, StrengthMode::kCorrelated,
                  SettingDistribution::general(proof.scenario(), sigma), eval);

  // Dual certificate: any single theory bounds the game value from above by
  // its worst setting; the gap to our value certifies both optimizations.
  double gap = worst_setting(eval.grad) - eval.value;
  result.dual_theory = eval.pi;
  const double gap_tol = std::max(options.outer_gap_tol, 1e-7);
  if (!(gap <= gap_tol)) {
    // The optimum found sits on a face whose projection leaves off-face
    // settings unpinned; re-solving along a strictly interior path yields a
    // projection that certifies every setting at once.
    std::vector<double> interior;
    InnerEval at_interior = mirror_interior(solver, &interior, options);
    double interior_gap = worst_setting(at_interior.grad) - eval.value;
    if (interior_gap > gap_tol && at_interior.value >= eval.value - 1e-7) {
      // Close the remaining distance by equalizing over the full support.
      interior = clipped_simplex(newton_equalize(solver, interior, options));
      at_interior = tight.eval(interior);
      interior_gap = worst_setting(at_interior.grad) - eval.value;
    }
    if (at_interior.value >= eval.value - 1e-9 && interior_gap < gap) {
      gap = interior_gap;
      result.dual_theory = at_interior.pi;
    }
  }
  if (!(gap <= gap_tol)) {
    const std::vector<double> dual = dual_feasibility_polish(
        solver.geometry(), result.dual_theory, eval.value + 2.5e-7, 100000);
    const double polished_gap =
        worst_setting(divergences_of(solver.geometry(), dual)) - eval.value;
    if (polished_gap < gap) {
      gap = polished_gap;
      result.dual_theory = dual;
    }
  }
  result.crosscheck_gap = std::max(gap, 0.0);
  result.converged = eval.converged && *result.crosscheck_gap <= 1e-6;
  return result;
}

namespace {

// One coordinate-ascent run of the product-form game from a given start.
struct ProductRun {
  double value = -kInf;
  std::vector<std::vector<double>> marginals;
  bool valid = false;
};

std::vector<double> product_sigma(const Scenario& scenario,
                                  const std::vector<std::vector<double>>& m) {
  const int S = scenario.joint_setting_count();
  std::vector<double> sigma(S, 1.0);
  for (int s = 0; s < S; ++s) {
    const std::vector<int> tuple = scenario.joint_setting_tuple(s);
    for (int j = 0; j < scenario.parties(); ++j) sigma[s] *= m[j][tuple[j]];
  }
  return sigma;
}

// Golden-section maximization of a concave section over [0, 1]. Boundary
// optima land within the final bracket width of the endpoint.
template <typename Fn>
double golden_max(Fn&& f, double* best_value, double width = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 70 && b - a > width; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  // Snap a bracket hugging an endpoint onto it.
  double arg = fc >= fd ? c : d;
  *best_value = std::max(fc, fd);
  if (a <= width) {
    const double f0 = f(0.0);
    if (f0 >= *best_value) {
      *best_value = f0;
      arg = 0.0;
    }
  }
  if (b >= 1.0 - width) {
    const double f1 = f(1.0);
    if (f1 >= *best_value) {
      *best_value = f1;
      arg = 1.0;
    }
  }
  return arg;
}

// Maximizes the game value over one party's marginal simplex, others fixed.
double ascend_party(const Scenario& scenario, WarmSolver& inner,
                    std::vector<std::vector<double>>* marginals, int party,
                    double width) {
  const int n = scenario.settings(party);
  std::vector<double>& m = (*marginals)[party];
  auto value_at = [&](const std::vector<double>& candidate) {
    std::vector<std::vector<double>> trial = *marginals;
    trial[party] = candidate;
    return inner.eval(product_sigma(scenario, trial)).value;
  };

  if (n == 2) {
    // One-dimensional block: a single golden section solves it outright.
    double block_value = 0.0;
    const double p =
        golden_max([&](double t) { return value_at({t, 1.0 - t}); },
                   &block_value, width);
    m = {p, 1.0 - p};
    return block_value;
  }

  double value = value_at(m);
  for (int step = 0; step < 40; ++step) {
    // Supergradient over this party's settings from the chain rule.
    const InnerEval eval = inner.eval(product_sigma(scenario, *marginals));
    std::vector<double> grad(n, 0.0);
    for (int s = 0; s < scenario.joint_setting_count(); ++s) {
      const std::vector<int> tuple = scenario.joint_setting_tuple(s);
      double weight = 1.0;
      for (int j = 0; j < scenario.parties(); ++j) {
        if (j != party) weight *= (*marginals)[j][tuple[j]];
      }
      if (weight == 0.0) continue;
      grad[tuple[party]] += weight * ranked(eval.grad[s]);
    }
    double dot = 0.0;
    int toward = 0, away = -1;
    for (int i = 0; i < n; ++i) {
      dot += m[i] * grad[i];
      if (grad[i] > grad[toward]) toward = i;
      if (m[i] > 0.0 && (away < 0 || grad[i] < grad[away])) away = i;
    }
    const double gap_toward = grad[toward] - dot;
    const double gap_away = away >= 0 ? dot - grad[away] : 0.0;
    if (std::max(gap_toward, gap_away) <= 1e-11) break;

    const bool move_toward = gap_toward >= gap_away;
    const int pivot = move_toward ? toward : away;
    const double gamma_max =
        move_toward ? 1.0 : (m[pivot] < 1.0 ? m[pivot] / (1.0 - m[pivot]) : 0.0);
    if (gamma_max <= 0.0) break;
    auto section = [&](double t) {
      const double gamma = t * gamma_max;
      std::vector<double> candidate(n);
      for (int i = 0; i < n; ++i) {
        const double di = (move_toward ? -m[i] : m[i]) +
                          (i == pivot ? (move_toward ? 1.0 : -1.0) : 0.0);
        candidate[i] = std::max(m[i] + gamma * di, 0.0);
      }
      double sum = 0.0;
      for (double x : candidate) sum += x;
      for (double& x : candidate) x /= sum;
      return value_at(candidate);
    };
    double section_value = 0.0;
    const double t_star = golden_max(section, &section_value, width);
    if (section_value <= value + 1e-15) break;
    const double gamma = t_star * gamma_max;
    for (int i = 0; i < n; ++i) {
      const double di = (move_toward ? -m[i] : m[i]) +
                        (i == pivot ? (move_toward ? 1.0 : -1.0) : 0.0);
      m[i] = std::max(m[i] + gamma * di, 0.0);
    }
    if (!move_toward && gamma >= gamma_max * (1.0 - 1e-12)) m[pivot] = 0.0;
    double sum = 0.0;
    for (double x : m) sum += x;
    for (double& x : m) x /= sum;
    value = section_value;
  }
  return value;
}

ProductRun run_product_ascent(const NonlocalityProof& proof,
                              const InnerSolver& solver,
                              std::vector<std::vector<double>> marginals,
                              const GameOptions& options) {
  const Scenario& scenario = proof.scenario();
  WarmSolver inner(solver, options.inner_tol);
  ProductRun run;
  run.value = inner.eval(product_sigma(scenario, marginals)).value;
  bool coarse = true;
  for (int sweep = 0; sweep < 200; ++sweep) {
    const double before = run.value;
    // Early sweeps place the blocks coarsely; later ones refine.
    inner.set_tol(coarse ? 1e-7 : options.inner_tol);
    const double width = coarse ? 1e-7 : 1e-12;
    for (int j = 0; j < scenario.parties(); ++j) {
      run.value =
          std::max(run.value, ascend_party(scenario, inner, &marginals, j, width));
    }
    if (run.value - before <= (coarse ? 1e-9 : 1e-13)) {
      if (!coarse) break;
      coarse = false;  // one more pass at full precision
    }
  }
  run.marginals = std::move(marginals);
  run.valid = true;
  return run;
}

}  // namespace

StrengthResult strength_uncorrelated(const NonlocalityProof& proof,
                                     const GameOptions& options) {
  const Scenario& scenario = proof.scenario();
  InnerSolver solver(proof);
  const int n_starts = std::max(options.multistarts, 1);
  std::vector<ProductRun> runs(n_starts);

  auto start_marginals = [&](int index) {
    std::vector<std::vector<double>> m(scenario.parties());
    if (index == 0) {
      for (int j = 0; j < scenario.parties(); ++j) {
        m[j].assign(scenario.settings(j), 1.0 / scenario.settings(j));
      }
      return m;
    }
    SplitMix64 rng(options.seed + 0x9E37u * static_cast<std::uint64_t>(index));
    for (int j = 0; j < scenario.parties(); ++j) {
      m[j].resize(scenario.settings(j));
      double sum = 0.0;
      for (double& x : m[j]) {
        x = -std::log(1.0 - rng.next_double());
        sum += x;
      }
      for (double& x : m[j]) x /= sum;
    }
    return m;
  };

  parallel_for(n_starts, resolve_threads(options.threads), [&](int index) {
    runs[index] = run_product_ascent(proof, solver, start_marginals(index), options);
  });

  // Deterministic merge: best value, ties by lexicographic marginals.
  int best = 0;
  for (int i = 1; i < n_starts; ++i) {
    if (!runs[i].valid) continue;
    if (runs[i].value > runs[best].value + 1e-12) {
      best = i;
    } else if (std::abs(runs[i].value - runs[best].value) <= 1e-12 &&
               runs[i].marginals < runs[best].marginals) {
      best = i;
    }
  }

  SettingDistribution sigma =
      SettingDistribution::product(scenario, runs[best].marginals);
  WarmSolver tight(solver, options.polish_inner_tol);
  const InnerEval eval = tight.eval(sigma.probs());
  return make_result(proof, StrengthMode::kUncorrelated, std::move(sigma), eval);
}

MinimaxResult minimax_value(const NonlocalityProof& proof,
                            const GameOptions& options) {
  InnerSolver solver(proof);
  const ProofGeometry& geometry = solver.geometry();
  MinimaxResult result;

  // An explaining theory settles the game at zero.
  WarmSolver uniform_inner(solver, options.polish_inner_tol);
  const InnerEval at_uniform =
      uniform_inner.eval(SettingDistribution::uniform(proof.scenario()).probs());
  if (at_uniform.value <= 1e-10) {
    result.pi_star = at_uniform.pi;
    result.per_setting_bits = divergences_of(geometry, result.pi_star);
    result.value_bits = worst_setting(result.per_setting_bits);
    result.gap = result.value_bits;
    result.converged = result.gap <= 1e-6;
    return result;
  }

  const StrengthResult cor = strength_correlated(proof, options);
  const double primal = cor.strength_bits;

  std::vector<double> best_pi =
      cor.dual_theory.empty() ? cor.pi_star : cor.dual_theory;
  double best_worst = worst_setting(divergences_of(geometry, best_pi));
  if (!(best_worst - primal <= 5e-7)) {
    const std::vector<double> polished = dual_feasibility_polish(
        geometry, best_pi, primal + 2.5e-7, 400000);
    const double polished_worst =
        worst_setting(divergences_of(geometry, polished));
    if (polished_worst < best_worst) {
      best_worst = polished_worst;
      best_pi = polished;
    }
  }

  result.value_bits = best_worst;
  result.pi_star = std::move(best_pi);
  result.per_setting_bits = divergences_of(geometry, result.pi_star);
  result.gap = std::abs(best_worst - primal);
  result.converged = result.gap <= 1e-6;
  return result;
}

EqualizerReport equalizer_check(const NonlocalityProof& proof,
                                const LocalTheory& pi, double tol) {
  EqualizerReport report;
  report.per_setting_bits =
      per_setting_divergences(proof, induced_tables(proof.scenario(), pi));
  double lo = kInf, hi = -kInf;
  for (double g : report.per_setting_bits) {
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  report.spread = hi - lo;
  report.equalizer = std::isfinite(report.spread) && report.spread <= tol;
  return report;
}

SaddleReport saddle_check(const NonlocalityProof& proof,
                          const SettingDistribution& sigma,
                          const LocalTheory& pi, double tol) {
  SaddleReport report;
  const KktReport kkt = kkt_check(proof, sigma, pi);
  report.kkt_residual = kkt.residual;
  const EqualizerReport eq = equalizer_check(proof, pi, tol);
  report.equalizer_spread = eq.spread;
  report.value_bits = objective_bits(proof, sigma, pi);
  report.saddle = kkt.residual <= tol && eq.spread <= tol;
  return report;
}

}  // namespace bellstrength
