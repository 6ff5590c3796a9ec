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

#ifndef SOMNO_WINDOWING_H_
#define SOMNO_WINDOWING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "somno/features.h"
#include "somno/matrix.h"
#include "somno/recording.h"
#include "somno/schema.h"
#include "somno/stage.h"

namespace somno {

// Half-open epoch index range.
struct EpochRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t size() const { return end - begin; }
  friend bool operator==(const EpochRange&, const EpochRange&) = default;
};

struct EpochGrid {
  int epoch_s = kEpochSeconds;
  std::int64_t n_epochs = 0;
};

// Epoch i covers [30 i, 30 (i + 1)) seconds; a trailing partial epoch is
// dropped. Uses the shortest channel. Throws on recordings shorter than one
// epoch.
EpochGrid segment_epochs(const Recording& recording, int epoch_s = kEpochSeconds);

struct EpochFeatureMatrix {
  std::string subject_id;
  std::string recording_id;
  std::vector<std::int64_t> epoch_index;
  // Either empty or one stage per row.
  std::vector<SleepStage> stages;
  RowMatrix values;
  FeatureSchema schema;
  // Free-form provenance (digests, source paths) carried into sidecars.
  std::map<std::string, std::string> provenance;

  std::int64_t rows() const { return values.rows(); }
};

struct ExtractOptions {
  FeatureParams params;
  // Epochs to emit; defaults to the whole grid. Shifted columns near the
  // range edges read real neighbours when they exist.
  std::optional<EpochRange> range;
  int workers = 1;
};

// Evaluates every schema column for each epoch. `recording` must already be
// montaged and preprocessed and carry one channel per schema channel name.
// Windows clipped by the recording edge are evaluated on the remaining part
// when at least half of the span exists; the rest are filled by
// boundary_fill.
EpochFeatureMatrix extract_features(const Recording& recording,
                                    const FeatureSchema& schema,
                                    const ExtractOptions& options = {});

// Replaces NaN entries by the nearest non-NaN value of the same column
// (earlier row wins ties); columns with no finite value become 0.
void boundary_fill(RowMatrix& values);

// Keeps rows whose mask entry is true, preserving order.
EpochFeatureMatrix select_rows(const EpochFeatureMatrix& m,
                               const std::vector<bool>& keep);

}  // namespace somno

#endif  // SOMNO_WINDOWING_H_
