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

#ifndef SOMNO_FEATURES_H_
#define SOMNO_FEATURES_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "somno/dsp.h"
#include "somno/recording.h"

namespace somno {

// Per-window feature functions. Unless stated otherwise each takes one
// windowed channel and returns a single finite real. Inputs that make a
// feature mathematically undefined (constant or zero-power windows) yield
// 0.0.

struct FeatureParams {
  int higuchi_kmax = 10;
  int permutation_order = 3;
  int permutation_delay = 1;
  double welch_segment_s = 5.0;
};

inline constexpr std::array<int, 4> kBinnedEntropyBins{5, 10, 30, 60};
inline constexpr std::array<int, 7> kFourierEntropyBins{2, 3, 5, 10, 30, 60, 100};

enum class Band { kSlowDelta, kFastDelta, kTheta, kAlpha, kSigma, kBeta };

struct FrequencyBand {
  Band band;
  std::string_view name;
  double low_hz;
  double high_hz;
};

inline constexpr std::array<FrequencyBand, 6> kFrequencyBands{{
    {Band::kSlowDelta, "slow_delta", 0.4, 1.0},
    {Band::kFastDelta, "fast_delta", 1.0, 4.0},
    {Band::kTheta, "theta", 4.0, 8.0},
    {Band::kAlpha, "alpha", 8.0, 12.0},
    {Band::kSigma, "sigma", 12.0, 16.0},
    {Band::kBeta, "beta", 16.0, 30.0},
}};
inline constexpr double kTotalPowerLowHz = 0.4;
inline constexpr double kTotalPowerHighHz = 30.0;

// Population standard deviation.
double stat_std(std::span<const double> x);
// 75th minus 25th percentile, linear interpolation between order stats.
double stat_iqr(std::span<const double> x);
// Fisher-Pearson (biased) skewness.
double stat_skewness(std::span<const double> x);
// Excess kurtosis, biased estimator.
double stat_kurtosis(std::span<const double> x);

// Sign changes between consecutive samples; a zero keeps the previous sign.
double zero_crossings(std::span<const double> x);

double hjorth_mobility(std::span<const double> x);
double hjorth_complexity(std::span<const double> x);

double petrosian_fd(std::span<const double> x);
double higuchi_fd(std::span<const double> x, int kmax = 10);

// Normalized to [0, 1] by log2(order!). Ties broken by index order.
double permutation_entropy(std::span<const double> x, int order = 3,
                           int delay = 1);

// Shannon entropy (nats) of an equal-width histogram over [min, max].
double binned_entropy(std::span<const double> x, int n_bins);

// Moments of |FFT| over bins 0..n/2 treated as weights on the bin index.
// `kurtosis` is the standardized fourth central moment (not excess).
struct FftStats {
  double centroid = 0;
  double variance = 0;
  double skew = 0;
  double kurtosis = 0;
};
FftStats fft_aggregated_stats(std::span<const double> x);

// binned_entropy of the Welch density normalized to a maximum of 1.
double fourier_binned_entropy(const PsdEstimate& psd, int n_bins);
double fourier_binned_entropy(std::span<const double> x, double fs_hz,
                              int n_bins, double segment_s = 5.0);

// Band-power features. EEG: absolute 0.4-30 Hz power, six relative powers,
// fast delta + theta power, and the alpha/theta, delta/beta, delta/sigma,
// delta/theta ratios (delta = 0.4-4 Hz). EOG: absolute and relative powers.
// EMG: nothing.
std::vector<std::pair<std::string, double>> spectral_features(
    const PsdEstimate& psd, ChannelKind kind);
std::vector<std::pair<std::string, double>> spectral_features(
    std::span<const double> x, double fs_hz, ChannelKind kind,
    double segment_s = 5.0);

struct FeatureId {
  std::string function;
  std::optional<std::string> parameter;

  // "function" or "function_parameter".
  std::string name() const;
  friend bool operator==(const FeatureId&, const FeatureId&) = default;
};

// Ordered features evaluated on one channel of the given kind.
std::vector<FeatureId> feature_catalog(ChannelKind kind);

enum class Evaluation { kEvaluate, kDegenerate };

// Decides whether `feature` can be computed on a window of `n_samples` at
// `fs_hz`. Welch-based features need a full segment and a sampling rate
// above twice the channel kind's upper analysis edge.
Evaluation short_signal_policy(const FeatureId& feature, ChannelKind kind,
                               std::size_t n_samples, double fs_hz,
                               const FeatureParams& params);

// Upper band edge the Welch features of this kind rely on (Hz).
double spectral_edge_hz(ChannelKind kind);

// Evaluates the whole catalog for `kind` on one window into `out`
// (size == feature_catalog(kind).size()), applying short_signal_policy.
void compute_window_features(std::span<const double> window, double fs_hz,
                             ChannelKind kind, const FeatureParams& params,
                             std::span<double> out);

}  // namespace somno

#endif  // SOMNO_FEATURES_H_
