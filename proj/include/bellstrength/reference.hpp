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

#include <vector>

namespace bellstrength {

// Published reference strengths (bits, 10 decimals) for the six catalog
// experiments; the verify-paper-table command recomputes and compares.
struct ReferenceStrengths {
  const char* name;
  double uniform;
  double uncorrelated;
  double correlated;
};

inline const std::vector<ReferenceStrengths>& reference_strength_table() {
  static const std::vector<ReferenceStrengths> table = {
      {"bell", 0.0141597409, 0.0158003672, 0.0169800305},
      {"bell-optimized", 0.0177632822, 0.0191506613, 0.0211293952},
      {"chsh", 0.0462738469, 0.0462738469, 0.0462738469},
      {"hardy", 0.0278585182, 0.0279816333, 0.0280347655},
      {"mermin", 0.0157895843, 0.0191506613, 0.0211293952},
      {"ghz", 0.2075187496, 0.2075187496, 0.4150374993},
  };
  return table;
}

}  // namespace bellstrength
