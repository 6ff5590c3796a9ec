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

#include "somno/preprocess.h"

#include "somno/error.h"

namespace somno {

const BandpassSpec& PreprocessConfig::band_for(ChannelKind kind) const {
  switch (kind) {
    case ChannelKind::kEeg:
      return eeg;
    case ChannelKind::kEog:
      return eog;
    case ChannelKind::kEmg:
      return emg;
  }
  return eeg;
}

Recording preprocess(const Recording& montaged, const PreprocessConfig& config,
                     std::vector<ChannelPreprocessNote>* notes) {
  Recording out;
  out.start_datetime = montaged.start_datetime;
  out.source_path = montaged.source_path;
  out.subject_id = montaged.subject_id;
  out.recording_id = montaged.recording_id;
  for (const Channel& ch : montaged.channels) {
    if (!ch.kind) {
      throw Error("preprocess: channel '" + ch.label + "' has no kind; apply a montage first");
    }
    ChannelPreprocessNote note{ch.label, false, false, ch.sampling_rate,
                               ch.sampling_rate, {}};
    const BandpassSpec& band = config.band_for(*ch.kind);
    Channel res{ch.label, ch.sampling_rate, {}, ch.kind};
    if (band.high_hz < ch.rate_hz() / 2) {
      res.samples = bandpass_zero_phase(ch.samples, ch.rate_hz(), band);
      note.filtered = true;
      if (ch.sampling_rate != config.target_rate_hz) {
        res.samples = resample_rational(res.samples, ch.sampling_rate,
                                        config.target_rate_hz);
        res.sampling_rate = config.target_rate_hz;
        note.resampled = true;
      }
    } else {
      res.samples = ch.samples;
      note.note = "rate " + ch.sampling_rate.to_string() +
                  " Hz cannot carry the pass band; kept unfiltered at native rate";
    }
    note.rate_out = res.sampling_rate;
    if (notes) notes->push_back(std::move(note));
    out.channels.push_back(std::move(res));
  }
  return out;
}

}  // namespace somno
