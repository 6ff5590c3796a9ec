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

#ifndef SOMNO_MATRIX_IO_H_
#define SOMNO_MATRIX_IO_H_

#include <filesystem>

#include "somno/windowing.h"

namespace somno {

// Binary container: `<stem>.f64` holds rows() x cols() little-endian IEEE
// doubles in row-major order; `<stem>.json` holds the schema (channels and
// column names), its hash, epoch indices, stages and provenance.
void write_matrix_binary(const std::filesystem::path& f64_path,
                         const EpochFeatureMatrix& m);
// Rebuilds the schema from the sidecar and refuses files whose stored hash
// or column names disagree with it.
EpochFeatureMatrix read_matrix_binary(const std::filesystem::path& f64_path);
// Sidecar alone: `values` is sized from the header but left unfilled.
EpochFeatureMatrix read_matrix_header(const std::filesystem::path& f64_path);

std::filesystem::path sidecar_path(const std::filesystem::path& f64_path);

// `subject_id,recording_id,epoch_index,stage,<columns...>`; values printed
// with 17 significant digits.
void write_matrix_csv(const std::filesystem::path& path, const EpochFeatureMatrix& m);

}  // namespace somno

#endif  // SOMNO_MATRIX_IO_H_
