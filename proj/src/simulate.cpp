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

#include "bellstrength/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "bellstrength/rng.hpp"

namespace bellstrength {

namespace detail {

std::uint64_t trial_random(std::uint64_t seed, std::int64_t trial, int slot) {
  return SplitMix64::at(seed, static_cast<std::uint64_t>(trial) * 2 + slot);
}

double trial_uniform(std::uint64_t seed, std::int64_t trial, int slot) {
  return static_cast<double>(trial_random(seed, trial, slot) >> 11) * 0x1.0p-53;
}

int sample_index(const std::vector<double>& probs, double u) {
  double cumulative = 0.0;
  const int n = static_cast<int>(probs.size());
  for (int i = 0; i < n; ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  // u landed in the roundoff sliver past the last cumulative; take the last
  // index that carries mass.
  for (int i = n - 1; i >= 0; --i) {
    if (probs[i] > 0.0) return i;
  }
  return n - 1;
}

}  // namespace detail

std::vector<TrialRecord> simulate(const NonlocalityProof& proof,
                                  const SettingDistribution& sigma,
                                  std::int64_t n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("simulate: negative trial count");
  std::vector<TrialRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  simulate_visit(proof, sigma, n, seed,
                 [&](const TrialRecord& r) { records.push_back(r); });
  return records;
}

EvidenceTrace evidence(const std::vector<TrialRecord>& records,
                       const NonlocalityProof& proof,
                       const SettingDistribution& sigma, const LocalTheory& pi,
                       std::int64_t history_stride) {
  (void)sigma;  // the sampled settings are undisputed; their factors cancel
  EvidenceTrace trace;
  trace.n = static_cast<std::int64_t>(records.size());

  const std::vector<ConditionalTable> induced =
      induced_tables(proof.scenario(), pi);

  // Per-trial terms repeat over a small set of (setting, outcome) cells;
  // precompute them once.
  std::vector<std::vector<double>> llr(induced.size());
  for (std::size_t s = 0; s < induced.size(); ++s) {
    const std::vector<double>& q = proof.table(static_cast<int>(s)).probs;
    llr[s].resize(q.size());
    for (std::size_t z = 0; z < q.size(); ++z) {
      if (q[z] <= 0.0) {
        llr[s][z] = 0.0;  // unreachable under the experiment's distribution
      } else if (induced[s].probs[z] <= 0.0) {
        llr[s][z] = std::numeric_limits<double>::infinity();
      } else {
        llr[s][z] = std::log2(q[z] / induced[s].probs[z]);
      }
    }
  }

  // Kahan-compensated accumulation of small per-trial terms.
  double sum = 0.0, compensation = 0.0;
  double sum_squares = 0.0;
  std::int64_t i = 0;
  for (const TrialRecord& record : records) {
    const double term = llr[record.setting][record.outcome];
    if (std::isinf(term)) {
      trace.infinite = true;
      ++i;
      continue;
    }
    const double y = term - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    sum_squares += term * term;
    ++i;
    if (history_stride > 0 && i % history_stride == 0) {
      trace.running_history.push_back(sum);
    }
  }
  trace.total_llr_bits = trace.infinite
                             ? std::numeric_limits<double>::infinity()
                             : sum;
  trace.per_trial_mean = trace.n > 0 ? trace.total_llr_bits / trace.n : 0.0;
  if (trace.n > 1 && !trace.infinite) {
    const double mean = sum / static_cast<double>(trace.n);
    const double var =
        (sum_squares - static_cast<double>(trace.n) * mean * mean) /
        static_cast<double>(trace.n - 1);
    trace.per_trial_stddev = std::sqrt(std::max(var, 0.0));
  }
  return trace;
}

}  // namespace bellstrength
