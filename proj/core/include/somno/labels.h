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

#ifndef SOMNO_LABELS_H_
#define SOMNO_LABELS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "somno/edf.h"
#include "somno/stage.h"
#include "somno/windowing.h"

namespace somno {

struct Hypnogram {
  int epoch_s = kEpochSeconds;
  std::vector<SleepStage> stages;
  std::string subject_id;
  std::string recording_id;

  std::int64_t size() const { return static_cast<std::int64_t>(stages.size()); }
};

// Assigns each 30-s epoch of the recording the stage of the annotation that
// covers it; epochs no stage annotation covers are UNKNOWN. Annotation
// texts that are not stage labels are ignored. Stage annotations that extend
// past the recording are cut at the last whole epoch.
Hypnogram annotations_to_hypnogram(std::span<const Annotation> annotations,
                                   double recording_duration_s);

// Sidecar format: header `epoch_index,stage`, one row per epoch with
// strictly increasing indices; skipped indices become UNKNOWN.
Hypnogram read_hypnogram_csv(const std::filesystem::path& path);
Hypnogram parse_hypnogram_csv(std::string_view text);
void write_hypnogram_csv(const std::filesystem::path& path, const Hypnogram& h);

// N4 -> N3; everything else unchanged.
Hypnogram map_rk_to_aasm(const Hypnogram& h);

// Pads with UNKNOWN or truncates so the hypnogram matches the epoch grid.
Hypnogram align_to_grid(const Hypnogram& h, std::int64_t n_epochs);

inline bool is_invalid(SleepStage s) {
  return s == SleepStage::kMovement || s == SleepStage::kUnknown;
}

// Drops MOVEMENT / UNKNOWN epochs from both inputs, keeping the pairing.
// `features` rows must correspond to `h` epochs features.epoch_index[r].
std::pair<Hypnogram, EpochFeatureMatrix> exclude_invalid(
    const Hypnogram& h, const EpochFeatureMatrix& features);

inline constexpr std::int64_t kWakeMarginEpochs = 60;

// [max(0, first_sleep - margin), min(n, last_sleep + margin + 1)) where
// first/last sleep are the first/last N1, N2, N3, N4 or REM epochs. Throws
// when the hypnogram holds no sleep.
EpochRange trim_wake(const Hypnogram& h,
                     std::int64_t margin_epochs = kWakeMarginEpochs);

struct LabelReport {
  std::string subject_id;
  std::string recording_id;
  std::int64_t n_epochs = 0;
  // Indexed by SleepStage value, counted over the emitted range after the
  // R&K merge and before exclusion.
  std::array<std::int64_t, 8> stage_counts{};
  std::int64_t excluded_movement = 0;
  std::int64_t excluded_unknown = 0;
  std::int64_t n_rows = 0;
  std::optional<EpochRange> trim_range;

  std::string to_json() const;
};

}  // namespace somno

#endif  // SOMNO_LABELS_H_
