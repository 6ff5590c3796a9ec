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

#include "somno/recording.h"

#include <algorithm>
#include <limits>

#include "somno/error.h"

namespace somno {

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::kEeg:
      return "EEG";
    case ChannelKind::kEog:
      return "EOG";
    case ChannelKind::kEmg:
      return "EMG";
  }
  return "?";
}

ChannelKind parse_channel_kind(std::string_view text) {
  if (text == "EEG" || text == "eeg") return ChannelKind::kEeg;
  if (text == "EOG" || text == "eog") return ChannelKind::kEog;
  if (text == "EMG" || text == "emg") return ChannelKind::kEmg;
  throw Error("unknown channel kind '" + std::string(text) + "'");
}

double Channel::duration_s() const {
  if (sampling_rate.is_zero()) return 0;
  return static_cast<double>(samples.size()) / rate_hz();
}

const Channel* Recording::find(std::string_view label) const {
  for (const auto& ch : channels) {
    if (ch.label == label) return &ch;
  }
  return nullptr;
}

const Channel& Recording::channel(std::string_view label) const {
  if (const Channel* ch = find(label)) return *ch;
  throw Error("recording '" + recording_id + "' has no channel '" +
              std::string(label) + "'");
}

double Recording::duration_s() const {
  if (channels.empty()) return 0;
  double d = std::numeric_limits<double>::infinity();
  for (const auto& ch : channels) d = std::min(d, ch.duration_s());
  return d;
}

}  // namespace somno
