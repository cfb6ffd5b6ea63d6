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

// One experimental trial: the sampled joint setting and the observed joint
// outcome (canonical tuple index for that setting).
struct TrialRecord {
  int setting = 0;
  int outcome = 0;
};

// Log-likelihood-ratio evidence accumulated over a run of trials.
struct EvidenceTrace {
  std::int64_t n = 0;
  double total_llr_bits = 0.0;
  double per_trial_mean = 0.0;
  double per_trial_stddev = 0.0;  // empirical, 0 when n < 2
  bool infinite = false;  // a trial hit an outcome the theory rules out
  // Running totals sampled every `history_stride` trials (empty when off).
  std::vector<double> running_history;
};

// I.i.d. trials of the experiment: setting ~ sigma, outcome ~ that setting's
// table. Counter-mode SplitMix64 makes output a pure function of (seed, i).
std::vector<TrialRecord> simulate(const NonlocalityProof& proof,
                                  const SettingDistribution& sigma,
                                  std::int64_t n, std::uint64_t seed);

// Streaming variant.
template <typename Fn>
void simulate_visit(const NonlocalityProof& proof,
                    const SettingDistribution& sigma, std::int64_t n,
                    std::uint64_t seed, Fn&& fn);

// Total log2 likelihood ratio of the experiment's tables against the local
// theory over the recorded trials. The setting factors are common to both
// hypotheses and cancel. Summation is compensated; a theory that assigns zero
// to an observed outcome flags the trace infinite.
EvidenceTrace evidence(const std::vector<TrialRecord>& records,
                       const NonlocalityProof& proof,
                       const SettingDistribution& sigma, const LocalTheory& pi,
                       std::int64_t history_stride = 0);

// --- implementation of the streaming sampler ---

namespace detail {
int sample_index(const std::vector<double>& probs, double u);
std::uint64_t trial_random(std::uint64_t seed, std::int64_t trial, int slot);
double trial_uniform(std::uint64_t seed, std::int64_t trial, int slot);
}  // namespace detail

template <typename Fn>
void simulate_visit(const NonlocalityProof& proof,
                    const SettingDistribution& sigma, std::int64_t n,
                    std::uint64_t seed, Fn&& fn) {
  for (std::int64_t i = 0; i < n; ++i) {
    TrialRecord record;
    record.setting =
        detail::sample_index(sigma.probs(), detail::trial_uniform(seed, i, 0));
    record.outcome = detail::sample_index(proof.table(record.setting).probs,
                                          detail::trial_uniform(seed, i, 1));
    fn(record);
  }
}

}  // namespace bellstrength
