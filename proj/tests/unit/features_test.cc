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

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "somno/features.h"
#include "synthetic.h"

namespace somno {
namespace {

using testing::sine;
using testing::uniform_noise;
using testing::white_noise;

constexpr double kPi = std::numbers::pi;

// Same construction as tests/oracles/feature_reference.py.
std::vector<double> reference_window() {
  std::vector<double> x(3000);
  std::uint64_t s = 12345;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    const double u = static_cast<double>(s >> 11) * 0x1.0p-53;
    const double t = static_cast<double>(i) / 100.0;
    x[i] = std::sin(2 * kPi * 3 * t) + 0.5 * std::sin(2 * kPi * 45 * t + 0.3) + 0.1 * t +
           0.4 * (u - 0.5);
  }
  return x;
}

std::map<std::string, double> eeg_features(std::span<const double> x, double fs = 100.0) {
  const auto catalog = feature_catalog(ChannelKind::kEeg);
  std::vector<double> out(catalog.size());
  compute_window_features(x, fs, ChannelKind::kEeg, {}, out);
  std::map<std::string, double> named;
  for (std::size_t i = 0; i < catalog.size(); ++i) named[catalog[i].name()] = out[i];
  return named;
}

TEST(FeatureCatalog, CountsPerChannelKind) {
  const auto eeg = feature_catalog(ChannelKind::kEeg).size();
  const auto eog = feature_catalog(ChannelKind::kEog).size();
  const auto emg = feature_catalog(ChannelKind::kEmg).size();
  EXPECT_EQ(eeg, 37u);
  EXPECT_EQ(eog, 32u);
  EXPECT_EQ(emg, 25u);
  EXPECT_EQ(2 * eeg + eog + emg, 131u);
}

TEST(FeatureCatalog, NamesUniqueAndEmgHasNoBandPower) {
  for (ChannelKind k : {ChannelKind::kEeg, ChannelKind::kEog, ChannelKind::kEmg}) {
    std::set<std::string> names;
    for (const auto& f : feature_catalog(k)) EXPECT_TRUE(names.insert(f.name()).second) << f.name();
  }
  for (const auto& f : feature_catalog(ChannelKind::kEmg)) {
    EXPECT_EQ(f.name().find("power"), std::string::npos) << f.name();
    EXPECT_EQ(f.name().find("ratio"), std::string::npos) << f.name();
  }
}

TEST(WindowFeatures, MatchIndependentReference) {
  // From tests/oracles/feature_reference.py.
  const std::map<std::string, double> expected{
      {"std", 1.1737884041989686},
      {"iqr", 1.6680222391977466},
      {"skewness", -0.006672809568913474},
      {"kurtosis", -0.5551238562499448},
      {"zero_crossings", 341.0},
      {"hjorth_mobility", 0.6212334000336455},
      {"hjorth_complexity", 3.107852527067203},
      {"higuchi_fd", 1.6373896397754166},
      {"petrosian_fd", 1.0393419705391853},
      {"permutation_entropy", 0.9279056210105007},
      {"binned_entropy_5", 1.4120675950867576},
      {"binned_entropy_10", 2.071557815412933},
      {"binned_entropy_30", 3.159646886956042},
      {"binned_entropy_60", 3.847501328997091},
      {"fft_centroid", 343.58048050883497},
      {"fft_variance", 221927.40486115703},
      {"fft_skew", 1.1610439867390365},
      {"fft_kurtosis", 2.8448109442068907},
      {"fourier_binned_entropy_2", 0.025989873531936835},
      {"fourier_binned_entropy_3", 0.025989873531936835},
      {"fourier_binned_entropy_5", 0.09073279565323927},
      {"fourier_binned_entropy_10", 0.09073279565323927},
      {"fourier_binned_entropy_30", 0.1370449996473921},
      {"fourier_binned_entropy_60", 0.1370449996473921},
      {"fourier_binned_entropy_100", 0.16293828495383378},
      {"abs_power", 0.5093730656543398},
      {"rel_power_slow_delta", 0.0005621563330183652},
      {"rel_power_fast_delta", 0.9853609438451503},
      {"rel_power_theta", 0.002134722785437025},
      {"rel_power_alpha", 0.0022419620925161953},
      {"rel_power_sigma", 0.0019407820058560889},
      {"rel_power_beta", 0.007759432938021886},
      {"fastdelta_theta_power", 0.5030036950319982},
      {"alpha_theta_ratio", 1.05023570639277},
      {"delta_beta_ratio", 127.06123089833807},
      {"delta_sigma_ratio", 508.0030097163194},
      {"delta_theta_ratio", 461.8506472615967},
  };
  const auto got = eeg_features(reference_window());
  ASSERT_EQ(got.size(), expected.size());
  for (const auto& [name, value] : expected) {
    ASSERT_TRUE(got.contains(name)) << name;
    EXPECT_NEAR(got.at(name), value, 1e-9 * std::max(1.0, std::abs(value))) << name;
  }
}

TEST(Stats, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(stat_std(x), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(stat_iqr(x), 2.0);
  EXPECT_NEAR(stat_skewness(x), 0.0, 1e-12);
  const std::vector<double> c(50, 3.25);
  EXPECT_EQ(stat_std(c), 0.0);
  EXPECT_EQ(stat_iqr(c), 0.0);
  EXPECT_EQ(stat_skewness(c), 0.0);
  EXPECT_EQ(stat_kurtosis(c), 0.0);
  EXPECT_THROW(stat_std(std::vector<double>{1.0}), std::exception);
}

TEST(ZeroCrossings, KnownValues) {
  EXPECT_EQ(zero_crossings(std::vector<double>{1, -1, 1, -1}), 3.0);
  EXPECT_EQ(zero_crossings(std::vector<double>(10, 2.0)), 0.0);
  // sin(pi i / 5): sign flips once after every multiple of 5 in [5, 2995].
  EXPECT_EQ(zero_crossings(sine(3000, 100.0, 10.0)), 599.0);
  // Zeros inherit the previous sign.
  EXPECT_EQ(zero_crossings(std::vector<double>{1, 0, 0, 1}), 0.0);
  EXPECT_EQ(zero_crossings(std::vector<double>{1, 0, -1}), 1.0);
}

TEST(Hjorth, SineMatchesAnalyticMobility) {
  for (double f : {1.0, 5.0, 10.0, 20.0}) {
    const auto x = sine(3000, 100.0, f);
    const double analytic = 2 * std::sin(kPi * f / 100.0);
    EXPECT_NEAR(hjorth_mobility(x) / analytic, 1.0, 0.01) << f;
    EXPECT_NEAR(hjorth_complexity(x), 1.0, 0.01) << f;
  }
  const std::vector<double> c(100, 1.0);
  EXPECT_EQ(hjorth_mobility(c), 0.0);
  EXPECT_EQ(hjorth_complexity(c), 0.0);
}

TEST(Petrosian, KnownValues) {
  std::vector<double> ramp(100);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  EXPECT_DOUBLE_EQ(petrosian_fd(ramp), 1.0);
  std::vector<double> alt(100);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : -1.0;
  // Direct evaluation with 98 derivative sign changes (oracle script).
  EXPECT_NEAR(petrosian_fd(alt), 1.0773767890401338, 1e-12);
  EXPECT_GT(petrosian_fd(white_noise(100, 5)), petrosian_fd(ramp));
}

TEST(Higuchi, LimitsAndInvariance) {
  std::vector<double> line(1000);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 0.5 * static_cast<double>(i);
  EXPECT_NEAR(higuchi_fd(line, 10), 1.0, 0.05);
  const auto noise = white_noise(3000, 17);
  const double hn = higuchi_fd(noise, 10);
  EXPECT_GE(hn, 1.8);
  EXPECT_LE(hn, 2.05);
  std::vector<double> affine(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i) affine[i] = 3.5 * noise[i] - 7.0;
  EXPECT_NEAR(higuchi_fd(affine, 10), hn, 1e-9);
  EXPECT_THROW(higuchi_fd(std::vector<double>(19, 0.0), 10), std::exception);
}

TEST(PermutationEntropy, KnownValues) {
  std::vector<double> ramp(500);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  EXPECT_EQ(permutation_entropy(ramp), 0.0);
  const auto noise = uniform_noise(30000, 23);
  const double h = permutation_entropy(noise);
  EXPECT_GE(h, 0.98);
  EXPECT_NEAR(h, 1.0, 0.02);
  std::vector<double> mono(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i) mono[i] = std::exp(3 * noise[i]) + 2;
  EXPECT_EQ(permutation_entropy(mono), h);
  EXPECT_THROW(permutation_entropy(std::vector<double>{1, 2, 3}), std::exception);
}

TEST(BinnedEntropy, KnownValues) {
  EXPECT_EQ(binned_entropy(std::vector<double>(20, 4.0), 5), 0.0);
  EXPECT_NEAR(binned_entropy(std::vector<double>{0, 1, 2, 3, 4}, 5), std::log(5.0), 1e-15);
  EXPECT_NEAR(binned_entropy(std::vector<double>{0, 0, 0, 0, 1, 1, 1, 1}, 2), std::log(2.0), 1e-15);
  EXPECT_THROW(binned_entropy(std::vector<double>{1, 2}, 0), std::exception);
}

TEST(FftStats, KnownValues) {
  const auto one = sine(1000, 1000.0, 50.0);  // exactly bin 50
  const auto s1 = fft_aggregated_stats(one);
  EXPECT_NEAR(s1.centroid, 50.0, 1e-9);
  EXPECT_NEAR(s1.variance, 0.0, 1e-6);  // leakage at 1e-13 weighted by bin distance squared
  std::vector<double> two(1000);
  for (std::size_t i = 0; i < two.size(); ++i) {
    two[i] = std::sin(2 * kPi * 30 * i / 1000.0) + std::sin(2 * kPi * 70 * i / 1000.0);
  }
  EXPECT_NEAR(fft_aggregated_stats(two).centroid, 50.0, 1e-9);
  EXPECT_EQ(fft_aggregated_stats(std::vector<double>(64, 2.0)).centroid, 0.0);
  const auto zero = fft_aggregated_stats(std::vector<double>(64, 0.0));
  EXPECT_EQ(zero.centroid, 0.0);
  EXPECT_EQ(zero.variance, 0.0);
  EXPECT_EQ(zero.skew, 0.0);
  EXPECT_EQ(zero.kurtosis, 0.0);
}

TEST(FourierBinnedEntropy, SineBelowNoise) {
  const auto s = sine(3000, 100.0, 10.0);
  const auto n = white_noise(3000, 29);
  for (int bins : kFourierEntropyBins) {
    EXPECT_LT(fourier_binned_entropy(s, 100.0, bins), fourier_binned_entropy(n, 100.0, bins))
        << bins;
  }
  EXPECT_LE(fourier_binned_entropy(n, 100.0, 2), std::log(2.0));
  EXPECT_EQ(fourier_binned_entropy(n, 100.0, 30), fourier_binned_entropy(n, 100.0, 30));
}

TEST(SpectralFeatures, SineConcentratesInAlpha) {
  const auto f = spectral_features(sine(3000, 100.0, 10.0), 100.0, ChannelKind::kEeg);
  std::map<std::string, double> m(f.begin(), f.end());
  EXPECT_GE(m.at("rel_power_alpha"), 0.95);
  for (const char* b : {"slow_delta", "fast_delta", "theta", "sigma", "beta"}) {
    EXPECT_LE(m.at(std::string("rel_power_") + b), 0.05) << b;
  }
}

TEST(SpectralFeatures, RelativePowersPartitionUnity) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = spectral_features(white_noise(3000, seed), 100.0, ChannelKind::kEog);
    ASSERT_EQ(f.size(), 7u);
    double sum = 0;
    for (const auto& [name, v] : f) {
      if (name.starts_with("rel_power_")) sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
  EXPECT_TRUE(spectral_features(white_noise(3000, 4), 100.0, ChannelKind::kEmg).empty());
}

TEST(SpectralFeatures, DeltaDominatesBetaForSlowSine) {
  const auto f = spectral_features(sine(3000, 100.0, 2.0), 100.0, ChannelKind::kEeg);
  std::map<std::string, double> m(f.begin(), f.end());
  EXPECT_GT(m.at("delta_beta_ratio"), 10.0);
}

TEST(SpectralFeatures, ZeroPowerGivesZeroRatios) {
  for (const auto& [name, v] : spectral_features(std::vector<double>(3000, 0.0), 100.0,
                                                 ChannelKind::kEeg)) {
    EXPECT_EQ(v, 0.0) << name;
  }
}

TEST(WindowFeatures, FiniteOnDegenerateWindows) {
  const std::vector<std::vector<double>> windows{
      std::vector<double>(3000, 0.0), std::vector<double>(3000, 5.0),
      std::vector<double>(30, 1.0), white_noise(30, 3)};
  for (ChannelKind kind : {ChannelKind::kEeg, ChannelKind::kEog, ChannelKind::kEmg}) {
    const auto catalog = feature_catalog(kind);
    for (const auto& w : windows) {
      const double fs = w.size() == 30 ? 1.0 : 100.0;
      std::vector<double> out(catalog.size(), -1.0);
      compute_window_features(w, fs, kind, {}, out);
      for (std::size_t i = 0; i < out.size(); ++i) {
        EXPECT_TRUE(std::isfinite(out[i])) << catalog[i].name();
      }
    }
  }
}

TEST(ShortSignalPolicy, OneHertzEmg) {
  const auto catalog = feature_catalog(ChannelKind::kEmg);
  std::vector<double> x(30);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.7 * i) + 0.1 * i;
  std::vector<double> out(catalog.size());
  compute_window_features(x, 1.0, ChannelKind::kEmg, {}, out);
  std::map<std::string, double> m;
  for (std::size_t i = 0; i < catalog.size(); ++i) m[catalog[i].name()] = out[i];
  EXPECT_NEAR(m.at("std"), stat_std(x), 1e-15);
  EXPECT_NEAR(m.at("iqr"), stat_iqr(x), 1e-15);
  EXPECT_EQ(m.at("zero_crossings"), zero_crossings(x));
  EXPECT_GT(m.at("zero_crossings"), 0.0);
  EXPECT_EQ(m.at("fourier_binned_entropy_100"), 0.0);
  const FeatureId fbe{"fourier_binned_entropy", "100"};
  EXPECT_EQ(short_signal_policy(fbe, ChannelKind::kEmg, 30, 1.0, {}), Evaluation::kDegenerate);
  EXPECT_EQ(short_signal_policy(fbe, ChannelKind::kEmg, 3000, 100.0, {}), Evaluation::kEvaluate);
}

TEST(ShortSignalPolicy, NothingDegenerateForEegAt100Hz) {
  for (const auto& f : feature_catalog(ChannelKind::kEeg)) {
    EXPECT_EQ(short_signal_policy(f, ChannelKind::kEeg, 3000, 100.0, {}), Evaluation::kEvaluate)
        << f.name();
  }
}

TEST(WindowFeatures, ScaleBehaviour) {
  const auto x = reference_window();
  std::vector<double> y(x.size());
  const double a = 2.5;
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i];
  const auto fx = eeg_features(x);
  const auto fy = eeg_features(y);
  const std::set<std::string> invariant_prefixes{"permutation_entropy", "binned_entropy",
                                                 "higuchi_fd", "petrosian_fd", "rel_power",
                                                 "ratio"};
  for (const auto& [name, v] : fx) {
    bool invariant = false;
    for (const auto& p : invariant_prefixes) invariant |= name.find(p) != std::string::npos;
    if (invariant && !name.starts_with("fourier")) {
      EXPECT_NEAR(fy.at(name), v, 1e-9 * std::max(1.0, std::abs(v))) << name;
    }
  }
  EXPECT_NEAR(fy.at("std"), a * fx.at("std"), 1e-12);
  EXPECT_NEAR(fy.at("abs_power"), a * a * fx.at("abs_power"), 1e-12);
}

}  // namespace
}  // namespace somno
