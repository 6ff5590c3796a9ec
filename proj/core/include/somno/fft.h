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

#ifndef SOMNO_FFT_H_
#define SOMNO_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace somno {

// Real-input forward DFT of a fixed length. Plans are shared per length and
// creation is serialized, so instances are cheap and usable from any thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // Unnormalized DFT of `in` for bins 0..n/2. `in` is not modified.
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;

 private:
  std::size_t n_;
  void* plan_;  // fftw_plan, owned by the process-wide cache
};

// |DFT| of `x` over the non-negative frequency bins.
std::vector<double> rfft_magnitude(std::span<const double> x);

}  // namespace somno

#endif  // SOMNO_FFT_H_
