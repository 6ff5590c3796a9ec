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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "somno/dsp.h"
#include "somno/error.h"
#include "somno/fft.h"

namespace somno {

PsdEstimate welch_psd(std::span<const double> signal, double fs_hz,
                      double segment_s) {
  if (!(fs_hz > 0) || !(segment_s > 0)) {
    throw Error("welch_psd: sampling rate and segment length must be positive");
  }
  const auto nperseg = static_cast<std::size_t>(std::llround(segment_s * fs_hz));
  if (nperseg < 2 || signal.size() < nperseg) {
    throw Error("welch_psd: signal of " + std::to_string(signal.size()) +
                " samples is shorter than one " + std::to_string(nperseg) +
                "-sample segment");
  }
  const std::size_t step = nperseg - nperseg / 2;
  const std::size_t n_segments = (signal.size() - nperseg) / step + 1;

  std::vector<double> window(nperseg);
  double window_power = 0;
  for (std::size_t k = 0; k < nperseg; ++k) {
    window[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(k) /
                                     static_cast<double>(nperseg));
    window_power += window[k] * window[k];
  }

  RealFft fft(nperseg);
  std::vector<double> seg(nperseg);
  std::vector<std::complex<double>> spec(fft.bins());
  std::vector<double> acc(fft.bins(), 0.0);
  for (std::size_t s = 0; s < n_segments; ++s) {
    const auto first = signal.begin() + static_cast<std::ptrdiff_t>(s * step);
    double mean = 0;
    for (std::size_t k = 0; k < nperseg; ++k) mean += first[static_cast<std::ptrdiff_t>(k)];
    mean /= static_cast<double>(nperseg);
    for (std::size_t k = 0; k < nperseg; ++k) {
      seg[k] = (first[static_cast<std::ptrdiff_t>(k)] - mean) * window[k];
    }
    fft.forward(seg, spec);
    for (std::size_t b = 0; b < spec.size(); ++b) acc[b] += std::norm(spec[b]);
  }

  PsdEstimate psd;
  psd.resolution_hz = fs_hz / static_cast<double>(nperseg);
  psd.freqs_hz.resize(acc.size());
  psd.density.resize(acc.size());
  const double scale =
      1.0 / (fs_hz * window_power * static_cast<double>(n_segments));
  const bool even = nperseg % 2 == 0;
  for (std::size_t b = 0; b < acc.size(); ++b) {
    psd.freqs_hz[b] = static_cast<double>(b) * psd.resolution_hz;
    const bool unpaired = b == 0 || (even && b + 1 == acc.size());
    psd.density[b] = acc[b] * scale * (unpaired ? 1.0 : 2.0);
  }
  return psd;
}

double band_power(const PsdEstimate& psd, double low_hz, double high_hz) {
  if (!(low_hz < high_hz)) throw Error("band_power: need low < high");
  const auto& f = psd.freqs_hz;
  const auto& d = psd.density;
  if (f.size() < 2 || f.size() != d.size()) {
    throw Error("band_power: malformed PSD estimate");
  }
  const double a = std::max(low_hz, f.front());
  const double b = std::min(high_hz, f.back());
  if (!(a < b)) {
    throw Error("band_power: band does not overlap the estimate's range");
  }
  // Exact integral of the linear interpolant between bins.
  const auto value_at = [&](std::size_t k, double x) {
    const double t = (x - f[k]) / (f[k + 1] - f[k]);
    return d[k] + t * (d[k + 1] - d[k]);
  };
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(f.begin(), f.end(), a) - f.begin());
  k = k == 0 ? 0 : k - 1;
  double total = 0;
  for (; k + 1 < f.size() && f[k] < b; ++k) {
    const double x0 = std::max(a, f[k]);
    const double x1 = std::min(b, f[k + 1]);
    if (x1 <= x0) continue;
    total += 0.5 * (x1 - x0) * (value_at(k, x0) + value_at(k, x1));
  }
  return total;
}

}  // namespace somno
