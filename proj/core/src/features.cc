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

#include "somno/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "somno/error.h"
#include "somno/fft.h"

namespace somno {
namespace {

void require_length(std::span<const double> x, std::size_t n,
                    const char* what) {
  if (x.size() < n) {
    throw Error(std::string(what) + ": window of " + std::to_string(x.size()) +
                " samples, need at least " + std::to_string(n));
  }
}

bool is_constant(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *lo == *hi;
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) /
         static_cast<double>(x.size());
}

// Population variance, exactly 0 for constant input.
double variance_of(std::span<const double> x) {
  if (is_constant(x)) return 0.0;
  const double m = mean_of(x);
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size());
}

std::vector<double> first_difference(std::span<const double> x) {
  std::vector<double> d(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  return d;
}

struct CentralMoments {
  double m2 = 0, m3 = 0, m4 = 0;
};

CentralMoments central_moments(std::span<const double> x) {
  const double m = mean_of(x);
  CentralMoments cm;
  for (double v : x) {
    const double d = v - m;
    const double d2 = d * d;
    cm.m2 += d2;
    cm.m3 += d2 * d;
    cm.m4 += d2 * d2;
  }
  const double n = static_cast<double>(x.size());
  cm.m2 /= n;
  cm.m3 /= n;
  cm.m4 /= n;
  return cm;
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

// Linear-interpolation quantile of already partially ordered data.
double quantile_select(std::vector<double>& v, double p) {
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double a = v[lo];
  if (frac == 0.0 || lo + 1 >= v.size()) return a;
  // Smallest element above position lo.
  const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo + 1), v.end());
  return a + frac * (b - a);
}

}  // namespace

double stat_std(std::span<const double> x) {
  require_length(x, 2, "stat_std");
  return std::sqrt(variance_of(x));
}

double stat_iqr(std::span<const double> x) {
  require_length(x, 2, "stat_iqr");
  if (is_constant(x)) return 0.0;
  std::vector<double> v(x.begin(), x.end());
  const double q1 = quantile_select(v, 0.25);
  const double q3 = quantile_select(v, 0.75);
  return q3 - q1;
}

double stat_skewness(std::span<const double> x) {
  require_length(x, 2, "stat_skewness");
  if (is_constant(x)) return 0.0;
  const CentralMoments cm = central_moments(x);
  if (!(cm.m2 > 0)) return 0.0;
  return finite_or_zero(cm.m3 / std::pow(cm.m2, 1.5));
}

double stat_kurtosis(std::span<const double> x) {
  require_length(x, 2, "stat_kurtosis");
  if (is_constant(x)) return 0.0;
  const CentralMoments cm = central_moments(x);
  if (!(cm.m2 > 0)) return 0.0;
  return finite_or_zero(cm.m4 / (cm.m2 * cm.m2) - 3.0);
}

double zero_crossings(std::span<const double> x) {
  require_length(x, 2, "zero_crossings");
  int sign = 0;
  std::size_t count = 0;
  for (double v : x) {
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (sign != 0 && s != sign) ++count;
    sign = s;
  }
  return static_cast<double>(count);
}

double hjorth_mobility(std::span<const double> x) {
  require_length(x, 3, "hjorth_mobility");
  const double var_x = variance_of(x);
  if (var_x == 0.0) return 0.0;
  const auto dx = first_difference(x);
  return finite_or_zero(std::sqrt(variance_of(dx) / var_x));
}

double hjorth_complexity(std::span<const double> x) {
  require_length(x, 3, "hjorth_complexity");
  const double var_x = variance_of(x);
  if (var_x == 0.0) return 0.0;
  const auto dx = first_difference(x);
  const double var_dx = variance_of(dx);
  if (var_dx == 0.0) return 0.0;
  const auto ddx = first_difference(dx);
  const double mob_x = std::sqrt(var_dx / var_x);
  const double mob_dx = std::sqrt(variance_of(ddx) / var_dx);
  return finite_or_zero(mob_dx / mob_x);
}

double petrosian_fd(std::span<const double> x) {
  require_length(x, 3, "petrosian_fd");
  std::size_t sign_changes = 0;
  bool prev = std::signbit(x[1] - x[0]);
  for (std::size_t i = 2; i < x.size(); ++i) {
    const bool cur = std::signbit(x[i] - x[i - 1]);
    if (cur != prev) ++sign_changes;
    prev = cur;
  }
  const double n = static_cast<double>(x.size());
  const double log_n = std::log10(n);
  return finite_or_zero(
      log_n / (log_n + std::log10(n / (n + 0.4 * static_cast<double>(sign_changes)))));
}

double higuchi_fd(std::span<const double> x, int kmax) {
  if (kmax < 2) throw Error("higuchi_fd: kmax must be at least 2");
  require_length(x, static_cast<std::size_t>(2 * kmax), "higuchi_fd");
  const auto n = static_cast<std::int64_t>(x.size());
  std::vector<double> log_inv_k;
  std::vector<double> log_len;
  for (int k = 1; k <= kmax; ++k) {
    double lk = 0;
    for (int m = 0; m < k; ++m) {
      const std::int64_t n_max = (n - m - 1) / k;
      double ll = 0;
      for (std::int64_t j = 1; j <= n_max; ++j) {
        ll += std::abs(x[static_cast<std::size_t>(m + j * k)] -
                       x[static_cast<std::size_t>(m + (j - 1) * k)]);
      }
      ll *= static_cast<double>(n - 1) / (static_cast<double>(n_max) * k * k);
      lk += ll;
    }
    lk /= k;
    if (!(lk > 0)) return 0.0;
    log_inv_k.push_back(std::log(1.0 / k));
    log_len.push_back(std::log(lk));
  }
  // Least-squares slope of log L(k) against log(1/k).
  const double mx = std::accumulate(log_inv_k.begin(), log_inv_k.end(), 0.0) / kmax;
  const double my = std::accumulate(log_len.begin(), log_len.end(), 0.0) / kmax;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < kmax; ++i) {
    sxy += (log_inv_k[i] - mx) * (log_len[i] - my);
    sxx += (log_inv_k[i] - mx) * (log_inv_k[i] - mx);
  }
  return finite_or_zero(sxy / sxx);
}

double permutation_entropy(std::span<const double> x, int order, int delay) {
  if (order < 2 || order > 8) {
    throw Error("permutation_entropy: order must be in [2, 8]");
  }
  if (delay < 1) throw Error("permutation_entropy: delay must be positive");
  require_length(x, static_cast<std::size_t>(order * delay + 1),
                 "permutation_entropy");
  std::vector<std::size_t> factorial(static_cast<std::size_t>(order) + 1, 1);
  for (std::size_t i = 1; i < factorial.size(); ++i) factorial[i] = factorial[i - 1] * i;

  const std::size_t n_vectors =
      x.size() - static_cast<std::size_t>((order - 1) * delay);
  std::vector<std::size_t> counts(factorial[static_cast<std::size_t>(order)], 0);
  std::vector<int> idx(static_cast<std::size_t>(order));
  for (std::size_t t = 0; t < n_vectors; ++t) {
    const auto at = [&](int j) { return x[t + static_cast<std::size_t>(j * delay)]; };
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return at(a) < at(b); });
    // Lehmer code of the ordinal pattern.
    std::size_t code = 0;
    for (int i = 0; i < order; ++i) {
      std::size_t smaller = 0;
      for (int j = i + 1; j < order; ++j) smaller += idx[j] < idx[i];
      code += smaller * factorial[static_cast<std::size_t>(order - 1 - i)];
    }
    ++counts[code];
  }
  double h = 0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n_vectors);
    h -= p * std::log2(p);
  }
  return finite_or_zero(h / std::log2(static_cast<double>(factorial[static_cast<std::size_t>(order)])));
}

double binned_entropy(std::span<const double> x, int n_bins) {
  if (n_bins < 1) throw Error("binned_entropy: need at least one bin");
  require_length(x, 1, "binned_entropy");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
  const double width = hi - lo;
  for (double v : x) {
    auto b = static_cast<std::int64_t>(std::floor((v - lo) / width * n_bins));
    b = std::clamp<std::int64_t>(b, 0, n_bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  double h = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

FftStats fft_aggregated_stats(std::span<const double> x) {
  require_length(x, 4, "fft_aggregated_stats");
  const std::vector<double> mag = rfft_magnitude(x);
  double total = 0, first = 0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    total += mag[i];
    first += mag[i] * static_cast<double>(i);
  }
  FftStats s;
  if (!(total > 0) || !std::isfinite(total)) return s;
  s.centroid = first / total;
  double m2 = 0, m3 = 0, m4 = 0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double d = static_cast<double>(i) - s.centroid;
    const double w = mag[i] / total;
    m2 += w * d * d;
    m3 += w * d * d * d;
    m4 += w * d * d * d * d;
  }
  s.variance = m2;
  // Spread below half a bin leaves the higher moments meaningless.
  if (m2 >= 0.5) {
    s.skew = finite_or_zero(m3 / std::pow(m2, 1.5));
    s.kurtosis = finite_or_zero(m4 / (m2 * m2));
  }
  return s;
}

double fourier_binned_entropy(const PsdEstimate& psd, int n_bins) {
  const double peak = *std::max_element(psd.density.begin(), psd.density.end());
  if (!(peak > 0)) return 0.0;
  std::vector<double> normalized(psd.density.size());
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    normalized[i] = psd.density[i] / peak;
  }
  return binned_entropy(normalized, n_bins);
}

double fourier_binned_entropy(std::span<const double> x, double fs_hz,
                              int n_bins, double segment_s) {
  return fourier_binned_entropy(welch_psd(x, fs_hz, segment_s), n_bins);
}

std::vector<std::pair<std::string, double>> spectral_features(
    const PsdEstimate& psd, ChannelKind kind) {
  std::vector<std::pair<std::string, double>> out;
  if (kind == ChannelKind::kEmg) return out;
  const double total = band_power(psd, kTotalPowerLowHz, kTotalPowerHighHz);
  std::array<double, kFrequencyBands.size()> power{};
  for (std::size_t i = 0; i < kFrequencyBands.size(); ++i) {
    power[i] = band_power(psd, kFrequencyBands[i].low_hz, kFrequencyBands[i].high_hz);
  }
  const auto ratio = [](double num, double den) {
    return den > 0 ? finite_or_zero(num / den) : 0.0;
  };
  out.emplace_back("abs_power", total);
  for (std::size_t i = 0; i < kFrequencyBands.size(); ++i) {
    out.emplace_back("rel_power_" + std::string(kFrequencyBands[i].name),
                     ratio(power[i], total));
  }
  if (kind == ChannelKind::kEeg) {
    const auto p = [&](Band b) { return power[static_cast<std::size_t>(b)]; };
    const double delta = p(Band::kSlowDelta) + p(Band::kFastDelta);
    out.emplace_back("fastdelta_theta_power", p(Band::kFastDelta) + p(Band::kTheta));
    out.emplace_back("alpha_theta_ratio", ratio(p(Band::kAlpha), p(Band::kTheta)));
    out.emplace_back("delta_beta_ratio", ratio(delta, p(Band::kBeta)));
    out.emplace_back("delta_sigma_ratio", ratio(delta, p(Band::kSigma)));
    out.emplace_back("delta_theta_ratio", ratio(delta, p(Band::kTheta)));
  }
  return out;
}

std::vector<std::pair<std::string, double>> spectral_features(
    std::span<const double> x, double fs_hz, ChannelKind kind,
    double segment_s) {
  return spectral_features(welch_psd(x, fs_hz, segment_s), kind);
}

}  // namespace somno
