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

#include "somno/montage.h"

#include <algorithm>

#include "somno/error.h"

namespace somno {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_compatible(const Channel& a, const Channel& b,
                        const std::string& output) {
  if (a.sampling_rate != b.sampling_rate) {
    throw Error("montage output '" + output + "': channels '" + a.label +
                "' (" + a.sampling_rate.to_string() + " Hz) and '" + b.label +
                "' (" + b.sampling_rate.to_string() +
                " Hz) have different sampling rates");
  }
  if (a.samples.size() != b.samples.size()) {
    throw Error("montage output '" + output + "': channels '" + a.label +
                "' and '" + b.label + "' have different lengths");
  }
}

}  // namespace

std::vector<std::string> Montage::input_labels() const {
  std::vector<std::string> labels;
  const auto add = [&](const std::string& l) {
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) {
      labels.push_back(l);
    }
  };
  for (const auto& out : outputs) {
    std::visit(Overloaded{
                   [&](const Pick& p) { add(p.label); },
                   [&](const Difference& d) {
                     add(d.minuend);
                     add(d.subtrahend);
                   },
                   [&](const Average& a) {
                     for (const auto& l : a.labels) add(l);
                   },
               },
               out.rule);
  }
  return labels;
}

bool Montage::is_standard_layout() const {
  int eeg = 0, eog = 0, emg = 0;
  for (const auto& out : outputs) {
    switch (out.kind) {
      case ChannelKind::kEeg:
        ++eeg;
        break;
      case ChannelKind::kEog:
        ++eog;
        break;
      case ChannelKind::kEmg:
        ++emg;
        break;
    }
  }
  return eeg == 2 && eog == 1 && emg == 1;
}

Montage Montage::sleep_edf() {
  return Montage{{
      {"EEG1", ChannelKind::kEeg, Pick{"EEG Fpz-Cz"}},
      {"EEG2", ChannelKind::kEeg, Pick{"EEG Pz-Oz"}},
      {"EOG", ChannelKind::kEog, Pick{"EOG horizontal"}},
      {"EMG", ChannelKind::kEmg, Pick{"EMG submental"}},
  }};
}

Montage Montage::mass_ss3() {
  return Montage{{
      {"EEG1", ChannelKind::kEeg, Difference{"EEG F4-CLE", "EOG Left Horiz"}},
      {"EEG2", ChannelKind::kEeg, Difference{"EEG F8-CLE", "EEG Cz-CLE"}},
      {"EOG", ChannelKind::kEog, Average{{"EOG Left Horiz", "EOG Right Horiz"}}},
      {"EMG", ChannelKind::kEmg, Average{{"EMG Chin1", "EMG Chin2"}}},
  }};
}

Recording derive_channels(const Recording& recording, const Montage& montage) {
  Recording out;
  out.start_datetime = recording.start_datetime;
  out.source_path = recording.source_path;
  out.subject_id = recording.subject_id;
  out.recording_id = recording.recording_id;
  for (const auto& spec : montage.outputs) {
    Channel ch = std::visit(
        Overloaded{
            [&](const Pick& p) { return recording.channel(p.label); },
            [&](const Difference& d) {
              const Channel& a = recording.channel(d.minuend);
              const Channel& b = recording.channel(d.subtrahend);
              require_compatible(a, b, spec.name);
              Channel c{spec.name, a.sampling_rate, a.samples, spec.kind};
              for (std::size_t i = 0; i < c.samples.size(); ++i) {
                c.samples[i] -= b.samples[i];
              }
              return c;
            },
            [&](const Average& avg) {
              if (avg.labels.empty()) {
                throw Error("montage output '" + spec.name +
                            "': Average of no channels");
              }
              const Channel& first = recording.channel(avg.labels.front());
              Channel c{spec.name, first.sampling_rate,
                        std::vector<double>(first.samples.size(), 0.0),
                        spec.kind};
              for (const auto& label : avg.labels) {
                const Channel& src = recording.channel(label);
                require_compatible(first, src, spec.name);
                for (std::size_t i = 0; i < c.samples.size(); ++i) {
                  c.samples[i] += src.samples[i];
                }
              }
              const double k = static_cast<double>(avg.labels.size());
              for (double& v : c.samples) v /= k;
              return c;
            },
        },
        spec.rule);
    ch.label = spec.name;
    ch.kind = spec.kind;
    out.channels.push_back(std::move(ch));
  }
  return out;
}

}  // namespace somno
