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

#include "bellstrength/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bellstrength {

double kl_bits_unchecked(const std::vector<double>& q,
                         const std::vector<double>& p) {
  double bits = 0.0;
  for (std::size_t z = 0; z < q.size(); ++z) {
    if (q[z] <= 0.0) continue;
    if (p[z] <= 0.0) return std::numeric_limits<double>::infinity();
    bits += q[z] * std::log2(q[z] / p[z]);
  }
  return bits;
}

double kl_bits(const std::vector<double>& q, const std::vector<double>& p,
               double norm_tol) {
  if (q.size() != p.size()) {
    throw std::invalid_argument("kl: distributions have different lengths");
  }
  double qs = 0.0, ps = 0.0;
  for (std::size_t z = 0; z < q.size(); ++z) {
    if (q[z] < -norm_tol || p[z] < -norm_tol) {
      throw std::invalid_argument("kl: negative probability");
    }
    qs += q[z];
    ps += p[z];
  }
  if (std::abs(qs - 1.0) > norm_tol || std::abs(ps - 1.0) > norm_tol) {
    throw std::invalid_argument("kl: inputs are not normalized");
  }
  return kl_bits_unchecked(q, p);
}

double objective_bits(const NonlocalityProof& proof,
                      const SettingDistribution& sigma,
                      const std::vector<ConditionalTable>& induced) {
  const int n_settings = proof.scenario().joint_setting_count();
  if (static_cast<int>(sigma.probs().size()) != n_settings ||
      static_cast<int>(induced.size()) != n_settings) {
    throw std::invalid_argument("objective: shape mismatch");
  }
  double bits = 0.0;
  for (int s = 0; s < n_settings; ++s) {
    const double weight = sigma.prob(s);
    if (weight == 0.0) continue;
    const double d = kl_bits_unchecked(proof.table(s).probs, induced[s].probs);
    if (std::isinf(d)) return d;
    bits += weight * d;
  }
  return bits;
}

double objective_bits(const NonlocalityProof& proof,
                      const SettingDistribution& sigma,
                      const LocalTheory& theory) {
  return objective_bits(proof, sigma, induced_tables(proof.scenario(), theory));
}

std::vector<double> per_setting_divergences(
    const NonlocalityProof& proof,
    const std::vector<ConditionalTable>& induced) {
  const int n_settings = proof.scenario().joint_setting_count();
  std::vector<double> out(n_settings);
  for (int s = 0; s < n_settings; ++s) {
    out[s] = kl_bits_unchecked(proof.table(s).probs, induced[s].probs);
  }
  return out;
}

double confidence_depressing_log2(double strength_bits, double n) {
  if (strength_bits < 0.0 || n < 0.0) {
    throw std::invalid_argument("confidence depressing factor needs nonnegative inputs");
  }
  return n * strength_bits;
}

}  // namespace bellstrength
