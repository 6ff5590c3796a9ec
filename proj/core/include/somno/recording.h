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

#ifndef SOMNO_RECORDING_H_
#define SOMNO_RECORDING_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "somno/rational.h"

namespace somno {

enum class ChannelKind { kEeg, kEog, kEmg };

std::string_view to_string(ChannelKind kind);
ChannelKind parse_channel_kind(std::string_view text);

struct Channel {
  std::string label;
  Rational sampling_rate;  // Hz
  std::vector<double> samples;  // physical units
  std::optional<ChannelKind> kind;

  double rate_hz() const { return sampling_rate.to_double(); }
  double duration_s() const;
};

// A multichannel recording in physical units. Treated as immutable once
// built; share it by const reference.
struct Recording {
  std::vector<Channel> channels;
  std::optional<std::chrono::sys_seconds> start_datetime;
  std::string source_path;
  std::string subject_id;
  std::string recording_id;

  const Channel* find(std::string_view label) const;
  // Throws somno::Error when the label is missing.
  const Channel& channel(std::string_view label) const;
  // Shortest channel duration in seconds; 0 for an empty recording.
  double duration_s() const;
};

}  // namespace somno

#endif  // SOMNO_RECORDING_H_
