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
#include <numbers>

#include "somno/dsp.h"
#include "somno/error.h"

namespace somno {
namespace {

constexpr double kKaiserBeta = 5.0;
constexpr std::int64_t kHalfLengthPerFactor = 10;

// Low-pass FIR at cutoff 1/max(up, down) of the upsampled Nyquist, unity DC
// gain, scaled by `up` to compensate for zero stuffing.
std::vector<double> anti_alias_filter(std::int64_t up, std::int64_t down) {
  const std::int64_t factor = std::max(up, down);
  const std::int64_t half = kHalfLengthPerFactor * factor;
  const std::size_t len = static_cast<std::size_t>(2 * half + 1);
  const double cutoff = 1.0 / static_cast<double>(factor);
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);
  std::vector<double> h(len);
  double sum = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const double m = static_cast<double>(i) - static_cast<double>(half);
    const double arg = std::numbers::pi * cutoff * m;
    const double sinc = m == 0 ? 1.0 : std::sin(arg) / arg;
    const double r = 2.0 * static_cast<double>(i) / static_cast<double>(len - 1) - 1.0;
    const double w =
        std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
        i0_beta;
    h[i] = cutoff * sinc * w;
    sum += h[i];
  }
  for (double& v : h) v *= static_cast<double>(up) / sum;
  return h;
}

}  // namespace

std::vector<double> resample_rational(std::span<const double> signal,
                                      Rational fs_in_hz, Rational fs_out_hz) {
  if (fs_in_hz <= Rational(0) || fs_out_hz <= Rational(0)) {
    throw Error("resampling rates must be positive");
  }
  if (fs_in_hz == fs_out_hz) {
    return std::vector<double>(signal.begin(), signal.end());
  }
  const Rational ratio = fs_out_hz / fs_in_hz;
  const std::int64_t up = ratio.num();
  const std::int64_t down = ratio.den();
  if (up > kMaxResampleFactor || down > kMaxResampleFactor) {
    throw Error("resampling ratio " + ratio.to_string() +
                " is too complex (factors above " +
                std::to_string(kMaxResampleFactor) + ")");
  }
  const auto n_in = static_cast<std::int64_t>(signal.size());
  // round(n * up / down) in exact integer arithmetic, half away from zero.
  const std::int64_t n_out = (2 * n_in * up + down) / (2 * down);
  const std::vector<double> h = anti_alias_filter(up, down);
  const auto half = static_cast<std::int64_t>(h.size() / 2);

  std::vector<double> out(static_cast<std::size_t>(n_out));
  for (std::int64_t m = 0; m < n_out; ++m) {
    const std::int64_t t = m * down;  // position on the upsampled grid
    // Input samples n with |t - n*up| <= half.
    std::int64_t lo = t - half;
    lo = lo <= 0 ? 0 : (lo + up - 1) / up;
    std::int64_t hi = (t + half) / up;
    hi = std::min(hi, n_in - 1);
    double acc = 0;
    for (std::int64_t n = lo; n <= hi; ++n) {
      acc += signal[static_cast<std::size_t>(n)] *
             h[static_cast<std::size_t>(t - n * up + half)];
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return out;
}

}  // namespace somno
