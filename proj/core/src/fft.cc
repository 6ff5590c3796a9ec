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

#include "somno/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "somno/error.h"

namespace somno {
namespace {

// FFTW's planner is not thread-safe; executing an existing plan on new
// arrays is. Plans live for the whole process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    // FFTW_ESTIMATE keeps plan selection (and thus output bits) independent
    // of timing measurements.
    fftw_plan plan = fftw_plan_dft_r2c_1d(
        static_cast<int>(n), in.data(),
        reinterpret_cast<fftw_complex*>(out.data()),
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("fftw planning failed");
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::size_t, fftw_plan> plans_;
};

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n), plan_(nullptr) {
  if (n == 0) throw Error("FFT length must be positive");
  plan_ = PlanCache::instance().get(n);
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != bins()) {
    throw Error("RealFft::forward: buffer size mismatch");
  }
  // r2c out-of-place preserves its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_),
                       const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

std::vector<double> rfft_magnitude(std::span<const double> x) {
  RealFft fft(x.size());
  std::vector<std::complex<double>> spec(fft.bins());
  fft.forward(x, spec);
  std::vector<double> mag(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) mag[i] = std::abs(spec[i]);
  return mag;
}

}  // namespace somno
