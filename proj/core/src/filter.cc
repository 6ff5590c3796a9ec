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

namespace somno {
namespace {

using cplx = std::complex<double>;

cplx eval_section(const Biquad& s, cplx z_inv) {
  const cplx num = s.b0 + z_inv * (s.b1 + z_inv * s.b2);
  const cplx den = 1.0 + z_inv * (s.a1 + z_inv * s.a2);
  return num / den;
}

// Runs the cascade over x in place, sections initialised with zi * x0.
void run_cascade(std::span<const Biquad> sections,
                 std::span<const double> zi_pairs, double x0,
                 std::vector<double>& x) {
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Biquad& s = sections[k];
    double z1 = zi_pairs[2 * k] * x0;
    double z2 = zi_pairs[2 * k + 1] * x0;
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

// Steady-state section states for a unit step input to the cascade.
std::vector<double> step_initial_conditions(std::span<const Biquad> sections) {
  std::vector<double> zi(2 * sections.size());
  double scale = 1.0;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Biquad& s = sections[k];
    const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    zi[2 * k] = scale * (gain - s.b0);
    zi[2 * k + 1] = scale * (s.b2 - s.a2 * gain);
    scale *= gain;
  }
  return zi;
}

}  // namespace

std::vector<Biquad> butterworth_bandpass(const BandpassSpec& spec,
                                         double fs_hz) {
  const double nyquist = fs_hz / 2;
  if (!(fs_hz > 0)) throw Error("sampling rate must be positive");
  if (spec.order < 1 || spec.order > 16) {
    throw Error("band-pass order must be in [1, 16]");
  }
  if (!(spec.low_hz > 0) || !(spec.low_hz < spec.high_hz)) {
    throw Error("band-pass edges must satisfy 0 < low < high");
  }
  if (spec.high_hz >= nyquist) {
    throw Error("band-pass upper edge " + std::to_string(spec.high_hz) +
                " Hz is not below the Nyquist frequency " +
                std::to_string(nyquist) + " Hz");
  }
  const int n = spec.order;
  const double fs2 = 2.0 * fs_hz;
  const double wl = fs2 * std::tan(std::numbers::pi * spec.low_hz / fs_hz);
  const double wh = fs2 * std::tan(std::numbers::pi * spec.high_hz / fs_hz);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);

  // Analog low-pass prototype poles, then low-pass -> band-pass, then the
  // bilinear map to the z-plane.
  std::vector<cplx> zpoles;
  for (int m = -n + 1; m <= n - 1; m += 2) {
    const cplx p = -std::exp(cplx(0, std::numbers::pi * m / (2.0 * n)));
    const cplx half = p * (bw / 2);
    const cplx root = std::sqrt(half * half - w0 * w0);
    for (const cplx s : {half + root, half - root}) {
      zpoles.push_back((fs2 + s) / (fs2 - s));
    }
  }

  std::vector<cplx> upper;
  std::vector<double> real;
  for (const cplx& z : zpoles) {
    if (std::abs(z.imag()) > 1e-14) {
      if (z.imag() > 0) upper.push_back(z);
    } else {
      real.push_back(z.real());
    }
  }
  std::sort(real.begin(), real.end());
  std::vector<Biquad> sections;
  for (const cplx& z : upper) {
    sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
  }
  for (std::size_t i = 0; i + 1 < real.size(); i += 2) {
    sections.push_back(
        {1.0, 0.0, -1.0, -(real[i] + real[i + 1]), real[i] * real[i + 1]});
  }
  if (sections.size() != static_cast<std::size_t>(n)) {
    throw Error("band-pass design produced an unexpected pole layout");
  }

  // Normalize to unit gain at the digital image of the analog centre.
  const double wc = 2.0 * std::atan(w0 / fs2);
  const cplx z_inv = std::exp(cplx(0, -wc));
  cplx h = 1.0;
  for (const auto& s : sections) h *= eval_section(s, z_inv);
  const double g = 1.0 / std::abs(h);
  sections.front().b0 *= g;
  sections.front().b1 *= g;
  sections.front().b2 *= g;
  return sections;
}

std::size_t filtfilt_pad_length(std::size_t n_sections) {
  return 3 * (2 * n_sections + 1);
}

std::vector<double> sosfilt(std::span<const Biquad> sections,
                            std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  const std::vector<double> zero(2 * sections.size(), 0.0);
  run_cascade(sections, zero, 0.0, y);
  return y;
}

std::vector<double> sosfiltfilt(std::span<const Biquad> sections,
                                std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t pad = filtfilt_pad_length(sections.size());
  if (n <= pad) {
    throw Error("signal of " + std::to_string(n) +
                " samples is too short for zero-phase filtering (needs more "
                "than " + std::to_string(pad) + ")");
  }
  // Odd reflection about both end points.
  std::vector<double> ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

  const std::vector<double> zi = step_initial_conditions(sections);
  run_cascade(sections, zi, ext.front(), ext);
  std::reverse(ext.begin(), ext.end());
  run_cascade(sections, zi, ext.front(), ext);
  std::reverse(ext.begin(), ext.end());
  return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                             ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

std::vector<double> bandpass_zero_phase(std::span<const double> signal,
                                        double fs_hz,
                                        const BandpassSpec& spec) {
  const auto sections = butterworth_bandpass(spec, fs_hz);
  return sosfiltfilt(sections, signal);
}

}  // namespace somno
