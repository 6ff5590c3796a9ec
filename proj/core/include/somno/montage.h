// Copyright 2026 The Somno Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOMNO_MONTAGE_H_
#define SOMNO_MONTAGE_H_

#include <string>
#include <variant>
#include <vector>

#include "somno/recording.h"

namespace somno {

struct Pick {
  std::string label;
};
struct Difference {
  std::string minuend;
  std::string subtrahend;
};
struct Average {
  std::vector<std::string> labels;
};
using DerivationRule = std::variant<Pick, Difference, Average>;

struct MontageOutput {
  std::string name;
  ChannelKind kind;
  DerivationRule rule;
};

struct Montage {
  std::vector<MontageOutput> outputs;

  // Every input label referenced by any rule, deduplicated, first-use order.
  std::vector<std::string> input_labels() const;
  // Two EEG, one EOG and one EMG output.
  bool is_standard_layout() const;

  // Sleep-EDF (SC and ST): Fpz-Cz, Pz-Oz, horizontal EOG, submental EMG.
  static Montage sleep_edf();
  // MASS SS3: F4-EOG(L), F8-Cz, mean of both EOGs, mean of EMG1/EMG2.
  static Montage mass_ss3();
};

// Applies the montage. The result holds exactly the montage outputs, in
// montage order, tagged with their ChannelKind.
Recording derive_channels(const Recording& recording, const Montage& montage);

}  // namespace somno

#endif  // SOMNO_MONTAGE_H_
