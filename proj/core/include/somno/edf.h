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

#ifndef SOMNO_EDF_H_
#define SOMNO_EDF_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "somno/rational.h"
#include "somno/recording.h"

namespace somno {

inline constexpr int kEdfFixedHeaderBytes = 256;
inline constexpr int kEdfSignalHeaderBytes = 256;
inline constexpr char kEdfAnnotationsLabel[] = "EDF Annotations";

struct SignalSpec {
  std::string label;               // 16
  std::string transducer;          // 80
  std::string physical_dimension;  // 8
  double physical_min = 0;         // 8
  double physical_max = 0;         // 8
  int digital_min = 0;             // 8
  int digital_max = 0;             // 8
  std::string prefiltering;        // 80
  int samples_per_record = 0;      // 8
  std::string reserved;            // 32

  bool is_annotation() const { return label == kEdfAnnotationsLabel; }
  double to_physical(int digital) const;
};

struct EdfHeader {
  std::string version;       // 8
  std::string patient_id;    // 80
  std::string recording_id;  // 80
  std::string start_date;    // 8, dd.mm.yy
  std::string start_time;    // 8, hh.mm.ss
  std::chrono::sys_seconds start_datetime{};
  int header_bytes = 0;      // 8
  std::string reserved;      // 44, "EDF+C" / "EDF+D" for EDF+
  std::int64_t n_data_records = -1;  // 8, -1 = unknown
  Rational record_duration_s;        // 8
  std::vector<SignalSpec> signals;   // n_signals = signals.size()

  int n_signals() const { return static_cast<int>(signals.size()); }
  bool is_edf_plus() const;
  bool is_discontinuous() const;
  std::optional<std::size_t> annotation_signal() const;
  // Bytes occupied by one data record across all signals.
  std::int64_t record_bytes() const;
  // samples_per_record / record_duration_s, exact.
  Rational sampling_rate(std::size_t signal) const;
};

// Decodes the fixed and per-signal header. `bytes` must hold at least the
// full header (256 + 256 * n_signals bytes). Throws ParseError naming the
// byte offset of the offending field.
EdfHeader parse_edf_header(std::span<const std::uint8_t> bytes);

// Reads and decodes the header of a file on disk.
EdfHeader read_edf_header(const std::filesystem::path& path);

// Reads the selected signals (all non-annotation signals when `selection`
// is empty) converting digital samples to physical units.
Recording read_edf_signals(const std::filesystem::path& path,
                           const EdfHeader& header,
                           std::span<const std::string> selection = {});

struct Annotation {
  double onset_s = 0;
  std::optional<double> duration_s;
  std::string text;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

// Decodes the Timestamped Annotation Lists of one data record's annotation
// bytes. Empty (keep-alive) annotations are skipped.
std::vector<Annotation> parse_tal_block(std::span<const std::uint8_t> bytes,
                                        std::int64_t record_index = 0);

// All annotations of an EDF+ file sorted by onset (stable).
std::vector<Annotation> parse_edfplus_annotations(
    const std::filesystem::path& path);

}  // namespace somno

#endif  // SOMNO_EDF_H_
