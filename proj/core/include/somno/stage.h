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

#ifndef SOMNO_STAGE_H_
#define SOMNO_STAGE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace somno {

// The five AASM classes come first so their values double as class indices.
enum class SleepStage : std::uint8_t {
  kW = 0,
  kN1 = 1,
  kN2 = 2,
  kN3 = 3,
  kRem = 4,
  kN4 = 5,  // raw R&K only
  kMovement = 6,
  kUnknown = 7,
};

inline constexpr int kNumClasses = 5;
inline constexpr std::array<SleepStage, kNumClasses> kModelClasses{
    SleepStage::kW, SleepStage::kN1, SleepStage::kN2, SleepStage::kN3,
    SleepStage::kRem};

std::string_view to_string(SleepStage stage);
// Accepts the sidecar tokens W, N1, N2, N3, N4, REM, MOVEMENT, UNKNOWN.
SleepStage parse_stage(std::string_view token);
// Looks up an annotation text ("Sleep stage 4", "Movement time", ...) in the
// pinned alias table; nullopt for texts that are not stage labels.
std::optional<SleepStage> stage_from_annotation(std::string_view text);

inline bool is_model_class(SleepStage s) {
  return static_cast<int>(s) < kNumClasses;
}
// Index into kModelClasses; throws for non-model stages.
int class_index(SleepStage s);

}  // namespace somno

#endif  // SOMNO_STAGE_H_
