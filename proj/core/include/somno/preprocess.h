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

#ifndef SOMNO_PREPROCESS_H_
#define SOMNO_PREPROCESS_H_

#include <string>
#include <vector>

#include "somno/dsp.h"
#include "somno/recording.h"

namespace somno {

struct PreprocessConfig {
  BandpassSpec eeg{0.4, 30.0, 4};
  BandpassSpec eog{0.4, 30.0, 4};
  BandpassSpec emg{0.5, 10.0, 4};
  Rational target_rate_hz{100};

  const BandpassSpec& band_for(ChannelKind kind) const;
};

struct ChannelPreprocessNote {
  std::string channel;
  bool filtered = false;
  bool resampled = false;
  Rational rate_in;
  Rational rate_out;
  std::string note;
};

// Filters each montage output with its kind's band-pass at the native rate,
// then resamples it to the target rate. A channel whose rate cannot carry
// its pass band (upper edge at or above Nyquist, e.g. a 1 Hz RMS envelope)
// is passed through unfiltered and at its native rate.
Recording preprocess(const Recording& montaged, const PreprocessConfig& config,
                     std::vector<ChannelPreprocessNote>* notes = nullptr);

}  // namespace somno

#endif  // SOMNO_PREPROCESS_H_
