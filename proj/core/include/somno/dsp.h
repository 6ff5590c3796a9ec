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

#ifndef SOMNO_DSP_H_
#define SOMNO_DSP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "somno/rational.h"

namespace somno {

struct BandpassSpec {
  double low_hz = 0.4;
  double high_hz = 30.0;
  int order = 4;  // Butterworth prototype order; band-pass has 2*order poles
};

// Second-order section, a0 normalized to 1.
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

// Digital Butterworth band-pass via bilinear transform with pre-warped band
// edges. Unity gain at the geometric centre frequency. Throws if the band is
// not strictly inside (0, fs/2).
std::vector<Biquad> butterworth_bandpass(const BandpassSpec& spec,
                                         double fs_hz);

// Padding used on each side by the forward-backward filter.
std::size_t filtfilt_pad_length(std::size_t n_sections);

// Single causal pass through the cascade (direct form II transposed),
// starting from rest.
std::vector<double> sosfilt(std::span<const Biquad> sections,
                            std::span<const double> x);

// Zero-phase forward-backward application of the cascade with odd
// reflection padding and steady-state initial conditions.
std::vector<double> sosfiltfilt(std::span<const Biquad> sections,
                                std::span<const double> x);

// Butterworth band-pass applied forward-backward (zero phase, same length).
std::vector<double> bandpass_zero_phase(std::span<const double> signal,
                                        double fs_hz,
                                        const BandpassSpec& spec);

inline constexpr std::int64_t kMaxResampleFactor = 1024;

// Polyphase resampling by the exact ratio fs_out / fs_in = up / down with a
// Kaiser-windowed sinc anti-alias filter (zero delay). Output length is
// round(len * fs_out / fs_in). Identity (bitwise copy) when rates match.
std::vector<double> resample_rational(std::span<const double> signal,
                                      Rational fs_in_hz, Rational fs_out_hz);

struct PsdEstimate {
  std::vector<double> freqs_hz;
  std::vector<double> density;  // signal^2 / Hz, one-sided
  double resolution_hz = 0;
};

// Welch estimate: periodic Hann segments of `segment_s` seconds, 50%
// overlap, per-segment mean removal, one-sided density scaling, mean over
// segments. Throws if the signal is shorter than one segment.
PsdEstimate welch_psd(std::span<const double> signal, double fs_hz,
                      double segment_s = 5.0);

// Integral of the piecewise-linear density over [low_hz, high_hz] clipped
// to the estimate's frequency range. Throws on an empty overlap.
double band_power(const PsdEstimate& psd, double low_hz, double high_hz);

}  // namespace somno

#endif  // SOMNO_DSP_H_
