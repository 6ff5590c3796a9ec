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

#include "somno/error.h"
#include "somno/features.h"

namespace somno {
namespace {

enum class Family {
  kStatistic,      // needs 2 samples
  kHjorth,         // 3
  kPetrosian,      // 3
  kHiguchi,        // 2 * kmax
  kPermutation,    // order * delay + 1
  kBinnedEntropy,  // 1
  kFftStats,       // 4
  kWelch,          // one Welch segment at an adequate rate
};

Family family_of(const FeatureId& f) {
  const std::string& fn = f.function;
  if (fn == "std" || fn == "iqr" || fn == "skewness" || fn == "kurtosis" ||
      fn == "zero_crossings") {
    return Family::kStatistic;
  }
  if (fn == "hjorth_mobility" || fn == "hjorth_complexity") return Family::kHjorth;
  if (fn == "petrosian_fd") return Family::kPetrosian;
  if (fn == "higuchi_fd") return Family::kHiguchi;
  if (fn == "permutation_entropy") return Family::kPermutation;
  if (fn == "binned_entropy") return Family::kBinnedEntropy;
  if (fn.rfind("fft_", 0) == 0) return Family::kFftStats;
  return Family::kWelch;
}

}  // namespace

std::string FeatureId::name() const {
  return parameter ? function + "_" + *parameter : function;
}

std::vector<FeatureId> feature_catalog(ChannelKind kind) {
  std::vector<FeatureId> c;
  for (const char* fn : {"std", "iqr", "skewness", "kurtosis", "zero_crossings",
                         "hjorth_mobility", "hjorth_complexity", "higuchi_fd",
                         "petrosian_fd", "permutation_entropy"}) {
    c.push_back({fn, std::nullopt});
  }
  for (int bins : kBinnedEntropyBins) {
    c.push_back({"binned_entropy", std::to_string(bins)});
  }
  for (const char* fn : {"fft_centroid", "fft_variance", "fft_skew", "fft_kurtosis"}) {
    c.push_back({fn, std::nullopt});
  }
  for (int bins : kFourierEntropyBins) {
    c.push_back({"fourier_binned_entropy", std::to_string(bins)});
  }
  if (kind == ChannelKind::kEmg) return c;
  c.push_back({"abs_power", std::nullopt});
  for (const auto& band : kFrequencyBands) {
    c.push_back({"rel_power", std::string(band.name)});
  }
  if (kind == ChannelKind::kEog) return c;
  for (const char* fn : {"fastdelta_theta_power", "alpha_theta_ratio",
                         "delta_beta_ratio", "delta_sigma_ratio",
                         "delta_theta_ratio"}) {
    c.push_back({fn, std::nullopt});
  }
  return c;
}

double spectral_edge_hz(ChannelKind kind) {
  return kind == ChannelKind::kEmg ? 10.0 : kTotalPowerHighHz;
}

Evaluation short_signal_policy(const FeatureId& feature, ChannelKind kind,
                               std::size_t n_samples, double fs_hz,
                               const FeatureParams& params) {
  const auto need = [&](std::size_t n) {
    return n_samples >= n ? Evaluation::kEvaluate : Evaluation::kDegenerate;
  };
  switch (family_of(feature)) {
    case Family::kStatistic:
      return need(2);
    case Family::kHjorth:
    case Family::kPetrosian:
      return need(3);
    case Family::kHiguchi:
      return need(static_cast<std::size_t>(2 * params.higuchi_kmax));
    case Family::kPermutation:
      return need(static_cast<std::size_t>(
          params.permutation_order * params.permutation_delay + 1));
    case Family::kBinnedEntropy:
      return need(1);
    case Family::kFftStats:
      return need(4);
    case Family::kWelch: {
      const auto segment = static_cast<std::size_t>(
          std::llround(params.welch_segment_s * fs_hz));
      const bool ok = segment >= 2 && n_samples >= segment &&
                      fs_hz > 2.0 * spectral_edge_hz(kind);
      return ok ? Evaluation::kEvaluate : Evaluation::kDegenerate;
    }
  }
  return Evaluation::kDegenerate;
}

void compute_window_features(std::span<const double> window, double fs_hz,
                             ChannelKind kind, const FeatureParams& params,
                             std::span<double> out) {
  const std::vector<FeatureId> catalog = feature_catalog(kind);
  if (out.size() != catalog.size()) {
    throw Error("compute_window_features: output span has wrong size");
  }
  const std::size_t n = window.size();
  const auto ok = [&](const FeatureId& f) {
    return short_signal_policy(f, kind, n, fs_hz, params) == Evaluation::kEvaluate;
  };

  std::size_t i = 0;
  const auto put = [&](double v) { out[i++] = std::isfinite(v) ? v : 0.0; };

  // Time domain.
  const bool stats_ok = ok(catalog[0]);
  put(stats_ok ? stat_std(window) : 0.0);
  put(stats_ok ? stat_iqr(window) : 0.0);
  put(stats_ok ? stat_skewness(window) : 0.0);
  put(stats_ok ? stat_kurtosis(window) : 0.0);
  put(stats_ok ? zero_crossings(window) : 0.0);
  const bool hjorth_ok = ok(catalog[5]);
  put(hjorth_ok ? hjorth_mobility(window) : 0.0);
  put(hjorth_ok ? hjorth_complexity(window) : 0.0);
  put(ok(catalog[7]) ? higuchi_fd(window, params.higuchi_kmax) : 0.0);
  put(ok(catalog[8]) ? petrosian_fd(window) : 0.0);
  put(ok(catalog[9]) ? permutation_entropy(window, params.permutation_order,
                                           params.permutation_delay)
                     : 0.0);
  for (int bins : kBinnedEntropyBins) {
    put(ok(catalog[i]) ? binned_entropy(window, bins) : 0.0);
  }

  // Frequency domain.
  const FftStats fs = ok(catalog[i]) ? fft_aggregated_stats(window) : FftStats{};
  put(fs.centroid);
  put(fs.variance);
  put(fs.skew);
  put(fs.kurtosis);

  const bool welch_ok = ok(catalog[i]);
  PsdEstimate psd;
  if (welch_ok) psd = welch_psd(window, fs_hz, params.welch_segment_s);
  for (int bins : kFourierEntropyBins) {
    put(welch_ok ? fourier_binned_entropy(psd, bins) : 0.0);
  }
  if (kind != ChannelKind::kEmg) {
    if (welch_ok) {
      for (const auto& [name, value] : spectral_features(psd, kind)) put(value);
    } else {
      while (i < out.size()) put(0.0);
    }
  }
  if (i != out.size()) {
    throw Error("compute_window_features: catalog and evaluation out of sync");
  }
}

}  // namespace somno
