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

// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero when any criterion fails. Optional arguments select criteria by
// number.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "process.h"
#include "somno/cv.h"
#include "somno/dsp.h"
#include "somno/features.h"
#include "somno/logistic.h"
#include "somno/metrics.h"
#include "somno/montage.h"
#include "somno/preprocess.h"
#include "somno/quantile.h"
#include "somno/schema.h"
#include "somno/windowing.h"
#include "synthetic.h"

namespace somno {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using testing::read_text;
using testing::run_process;
using testing::write_text;
using Clock = std::chrono::steady_clock;

const std::string kCli = SOMNO_CLI_PATH;
constexpr double kPi = std::numbers::pi;

enum class Outcome { kPass, kFail, kSkip };

struct Result {
  Outcome outcome = Outcome::kPass;
  std::vector<std::string> failures;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      outcome = Outcome::kFail;
      failures.push_back(what);
    }
  }
  void note(const std::string& s) { details.push_back(s); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rms(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

// 1. Catalog and schema sizes.
Result catalog_and_schema() {
  Result r;
  const auto t0 = Clock::now();
  const auto eeg = feature_catalog(ChannelKind::kEeg).size();
  const auto eog = feature_catalog(ChannelKind::kEog).size();
  const auto emg = feature_catalog(ChannelKind::kEmg).size();
  const auto schema = FeatureSchema::standard();
  r.check(eeg == 37 && eog == 32 && emg == 25, "catalog sizes");
  r.check(schema.features_per_window() == 131, "features per window != 131");
  r.check(schema.size() == 1048, "schema columns != 1048");
  std::set<std::string> names;
  for (const auto& n : schema.column_names()) names.insert(n);
  r.check(names.size() == 1048, "duplicate column names");
  const double t = seconds_since(t0);
  r.check(t < 1.0, "runtime >= 1 s");
  r.note("catalog " + std::to_string(eeg) + "+" + std::to_string(eeg) + "+" +
         std::to_string(eog) + "+" + std::to_string(emg) + "=" +
         std::to_string(schema.features_per_window()) + ", columns " +
         std::to_string(schema.size()));
  r.note(fmt("%.3f s", t));
  return r;
}

// 2. Filter and spectral estimate sanity.
Result dsp_checks() {
  Result r;
  const auto t0 = Clock::now();
  const double fs = 100;
  const std::size_t n = 60000;
  const BandpassSpec band{0.4, 30.0, 4};
  // Interior only, away from the padding transients.
  auto interior = [&](const std::vector<double>& x) {
    return std::span<const double>(x).subspan(n / 10, n - n / 5);
  };
  double worst_pass = 0;
  for (double f : {2.0, 5.0, 10.0, 20.0}) {
    const auto x = testing::sine(n, fs, f);
    const auto y = bandpass_zero_phase(x, fs, band);
    worst_pass = std::max(worst_pass, std::abs(rms(interior(y)) / rms(interior(x)) - 1));
  }
  r.check(worst_pass <= 0.05, "pass-band gain");
  double worst_stop = 0;
  for (double f : {0.05, 45.0}) {
    const auto x = testing::sine(n, fs, f);
    const auto y = bandpass_zero_phase(x, fs, band);
    worst_stop = std::max(worst_stop, rms(interior(y)) / rms(interior(x)));
  }
  r.check(worst_stop <= 0.10, "stop-band attenuation");

  const auto s = testing::sine(30000, fs, 10.0);
  const auto psd = welch_psd(s, fs);
  const auto peak = std::max_element(psd.density.begin(), psd.density.end()) - psd.density.begin();
  r.check(std::abs(psd.freqs_hz[peak] - 10.0) < 1e-9, "Welch peak bin");
  const double p = band_power(psd, 9.0, 11.0);
  r.check(std::abs(p / 0.5 - 1) <= 0.03, "integrated sine power");

  const auto noise = testing::white_noise(30000, 11);
  const auto npsd = welch_psd(noise, fs);
  double mean = 0, var = 0;
  for (double v : noise) mean += v;
  mean /= static_cast<double>(noise.size());
  for (double v : noise) var += (v - mean) * (v - mean);
  var /= static_cast<double>(noise.size());
  const double total = band_power(npsd, 0.0, fs / 2);
  r.check(std::abs(total / var - 1) <= 0.05, "Parseval");

  const double t = seconds_since(t0);
  r.check(t < 10.0, "runtime >= 10 s");
  r.note(fmt("pass dev %.4f", worst_pass));
  r.note(fmt("stop %.4f", worst_stop));
  r.note(fmt("peak %.2f Hz", psd.freqs_hz[peak]));
  r.note(fmt("sine power %.4f", p));
  r.note(fmt("power/var %.4f", total / var));
  r.note(fmt("%.2f s", t));
  return r;
}

double petrosian_direct(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  int changes = 0;
  for (std::size_t i = 2; i < x.size(); ++i) {
    const double a = x[i - 1] - x[i - 2];
    const double b = x[i] - x[i - 1];
    if (a * b < 0) ++changes;
  }
  return std::log10(n) / (std::log10(n) + std::log10(n / (n + 0.4 * changes)));
}

// 3. Feature spot checks.
Result feature_checks() {
  Result r;
  const auto t0 = Clock::now();
  double worst_mob = 0;
  for (double f : {1.0, 5.0, 10.0, 20.0}) {
    const auto x = testing::sine(3000, 100.0, f);
    // Mobility of a sampled sine from its first difference: 2 sin(pi f / fs).
    const double analytic = 2 * std::sin(kPi * f / 100.0);
    worst_mob = std::max(worst_mob, std::abs(hjorth_mobility(x) / analytic - 1));
  }
  r.check(worst_mob <= 0.01, "Hjorth mobility");

  std::vector<double> ramp(3000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  const double pe_ramp = permutation_entropy(ramp);
  const double pe_noise = permutation_entropy(testing::white_noise(3000, 5));
  r.check(pe_ramp == 0.0, "permutation entropy of a ramp");
  r.check(pe_noise >= 0.98, "permutation entropy of noise");

  std::vector<double> alt(100), zig(200);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < zig.size(); ++i) zig[i] = static_cast<double>(i % 4 < 2 ? i % 4 : 4 - i % 4);
  std::vector<double> ramp100(ramp.begin(), ramp.begin() + 100);
  double worst_pfd = 0;
  for (const auto* x : {&ramp100, &alt, &zig}) {
    worst_pfd = std::max(worst_pfd, std::abs(petrosian_fd(*x) - petrosian_direct(*x)));
  }
  r.check(petrosian_fd(ramp100) == 1.0, "Petrosian ramp");
  r.check(std::abs(petrosian_fd(alt) - 1.0773767890401338) <= 1e-12, "Petrosian alternating");
  r.check(worst_pfd <= 1e-12, "Petrosian spot values");

  double worst_rel = 0;
  for (auto kind : {ChannelKind::kEeg, ChannelKind::kEog}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto x = testing::white_noise(3000, seed);
      const auto s = testing::sine(3000, 100.0, 2.0 + 3.0 * static_cast<double>(seed), 2.0);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += s[i];
      double sum = 0;
      for (const auto& [name, v] : spectral_features(x, 100.0, kind)) {
        if (name.starts_with("rel_power_")) sum += v;
      }
      worst_rel = std::max(worst_rel, std::abs(sum - 1));
    }
  }
  r.check(worst_rel <= 1e-6, "relative band powers sum");

  const FeatureParams params;
  bool all_finite = true;
  auto finite_for = [&](const std::vector<double>& w, double fs, ChannelKind kind) {
    std::vector<double> out(feature_catalog(kind).size());
    compute_window_features(w, fs, kind, params, out);
    for (double v : out) all_finite = all_finite && std::isfinite(v);
  };
  for (auto kind : {ChannelKind::kEeg, ChannelKind::kEog, ChannelKind::kEmg}) {
    finite_for(std::vector<double>(3000, 3.5), 100.0, kind);
    finite_for(std::vector<double>(3000, 0.0), 100.0, kind);
  }
  // 1 Hz RMS envelope, as recorded for EMG in some cassette studies.
  std::vector<double> envelope(30);
  for (std::size_t i = 0; i < envelope.size(); ++i) envelope[i] = 5 + std::sin(0.3 * static_cast<double>(i));
  finite_for(envelope, 1.0, ChannelKind::kEmg);
  finite_for(std::vector<double>(30, 2.0), 1.0, ChannelKind::kEmg);
  r.check(all_finite, "non-finite feature on a degenerate window");

  const double t = seconds_since(t0);
  r.check(t < 30.0, "runtime >= 30 s");
  r.note(fmt("mobility dev %.2e", worst_mob));
  r.note(fmt("PE ramp %.3f", pe_ramp));
  r.note(fmt("PE noise %.4f", pe_noise));
  r.note(fmt("rel sum dev %.1e", worst_rel));
  r.note(fmt("%.2f s", t));
  return r;
}

// 4. Quantile transform.
Result quantile_checks() {
  Result r;
  const Eigen::Index n = 10000;
  RowMatrix x(n, 3);
  testing::Rng rng(99);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = std::exp(rng.normal());
    x(i, 2) = rng.uniform() * 10 - 3;
  }
  const auto qt = QuantileTransform::fit(x);
  const RowMatrix u = qt.apply(x);
  double worst_ks = 0;
  bool monotone = true;
  for (Eigen::Index c = 0; c < 3; ++c) {
    std::vector<std::pair<double, double>> pairs(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) pairs[static_cast<std::size_t>(i)] = {x(i, c), u(i, c)};
    std::sort(pairs.begin(), pairs.end());
    std::vector<double> v(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = pairs[i].second;
      if (i > 0 && v[i] < v[i - 1]) monotone = false;
    }
    double ks = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double lo = static_cast<double>(i) / static_cast<double>(n);
      const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
      ks = std::max({ks, std::abs(v[i] - lo), std::abs(hi - v[i])});
    }
    worst_ks = std::max(worst_ks, ks);
  }
  r.check(worst_ks <= 0.02, "KS distance");
  r.check(monotone, "monotone");
  bool clipped = true;
  for (Eigen::Index c = 0; c < 3; ++c) {
    const double lo = x.col(c).minCoeff();
    const double hi = x.col(c).maxCoeff();
    clipped = clipped && qt.apply_one(c, lo) == 0.0 && qt.apply_one(c, hi) == 1.0 &&
              qt.apply_one(c, lo - 1e6) == 0.0 && qt.apply_one(c, hi + 1e6) == 1.0;
  }
  r.check(clipped, "range-edge clipping");
  r.note(fmt("KS %.5f", worst_ks));
  return r;
}

// Gaussian blobs around centres drawn from `centre_seed`; the noise comes
// from `noise_seed`, so equal centre seeds give train/test draws.
RowMatrix blobs(Eigen::Index n, Eigen::Index d, int k, double spread, std::uint64_t centre_seed,
                std::uint64_t noise_seed, std::vector<int>& y) {
  testing::Rng crng(centre_seed);
  Eigen::MatrixXd centres(k, d);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index j = 0; j < d; ++j) centres(c, j) = 4 * crng.normal();
  }
  testing::Rng rng(noise_seed);
  RowMatrix x(n, d);
  y.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % k);
    y[static_cast<std::size_t>(i)] = c;
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = centres(c, j) + spread * rng.normal();
  }
  return x;
}

// 5. Logistic regression.
Result logistic_checks() {
  Result r;
  std::vector<int> y;
  testing::Rng rng(7);
  RowMatrix x(50, 20);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
  }
  for (int i = 0; i < 50; ++i) y.push_back(i % 5);
  Eigen::MatrixXd w(5, 20);
  Eigen::VectorXd b(5);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.3 * rng.normal();
  for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = 0.3 * rng.normal();
  const double l2 = 0.7;
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  logistic_objective(x, y, w, b, l2, &gw, &gb);
  double worst = 0;
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::MatrixXd wp = w, wm = w;
    wp.data()[i] += h;
    wm.data()[i] -= h;
    const double fd = (logistic_objective(x, y, wp, b, l2, nullptr, nullptr) -
                       logistic_objective(x, y, wm, b, l2, nullptr, nullptr)) /
                      (2 * h);
    worst = std::max(worst, std::abs(fd - gw.data()[i]) / std::max(1.0, std::abs(fd)));
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    Eigen::VectorXd bp = b, bm = b;
    bp[i] += h;
    bm[i] -= h;
    const double fd = (logistic_objective(x, y, w, bp, l2, nullptr, nullptr) -
                       logistic_objective(x, y, w, bm, l2, nullptr, nullptr)) /
                      (2 * h);
    worst = std::max(worst, std::abs(fd - gb[i]) / std::max(1.0, std::abs(fd)));
  }
  r.check(worst <= 1e-5, "finite-difference gradient");

  std::vector<int> yb, yt;
  const RowMatrix xb = blobs(1000, 10, 5, 3.0, 21, 22, yb);
  const RowMatrix xt = blobs(1000, 10, 5, 3.0, 21, 23, yt);
  const auto m1 = fit_logistic(xb, yb, 5);
  const auto pred = m1.predict(xt);
  int correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == yt[i];
  const double acc = static_cast<double>(correct) / static_cast<double>(pred.size());
  r.check(acc >= 0.95, "blob accuracy");
  LogisticOptions par;
  par.workers = 4;
  const auto m2 = fit_logistic(xb, yb, 5);
  const auto m3 = fit_logistic(xb, yb, 5, par);
  const bool same = m1.weights == m2.weights && m1.biases == m2.biases &&
                    m1.weights == m3.weights && m1.biases == m3.biases;
  r.check(same, "refit not bitwise identical");
  r.note(fmt("FD rel err %.2e", worst));
  r.note(fmt("held-out blob acc %.4f", acc));
  r.note(std::string("refit ") + (same ? "bitwise equal" : "differs"));
  return r;
}

std::vector<SleepStage> stages_of(std::span<const int> idx) {
  std::vector<SleepStage> out;
  for (int i : idx) out.push_back(kModelClasses[static_cast<std::size_t>(i)]);
  return out;
}

struct BruteMetrics {
  double mf1, acc, kappa;
};

// Straight from the label streams, without a confusion matrix.
BruteMetrics brute_force(const std::vector<int>& t, const std::vector<int>& p) {
  const double n = static_cast<double>(t.size());
  std::set<int> present(t.begin(), t.end());
  present.insert(p.begin(), p.end());
  double f1_sum = 0;
  for (int c : present) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      tp += t[i] == c && p[i] == c;
      fp += t[i] != c && p[i] == c;
      fn += t[i] == c && p[i] != c;
    }
    f1_sum += 2.0 * tp / (2.0 * tp + fp + fn);
  }
  long agree = 0;
  for (std::size_t i = 0; i < t.size(); ++i) agree += t[i] == p[i];
  const double po = agree / n;
  double pe = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    const double nt = static_cast<double>(std::count(t.begin(), t.end(), c));
    const double np = static_cast<double>(std::count(p.begin(), p.end(), c));
    pe += nt * np;
  }
  pe /= n * n;
  const double kappa = pe == 1 ? 0 : (po - pe) / (1 - pe);
  return {f1_sum / static_cast<double>(present.size()), po, kappa};
}

// 6. Metrics.
Result metrics_checks() {
  Result r;
  using Counts = std::array<std::array<int, kNumClasses>, kNumClasses>;
  const std::vector<Counts> cases = {
      {{{50, 3, 2, 0, 5}, {4, 10, 6, 0, 3}, {1, 5, 80, 7, 2}, {0, 0, 9, 30, 0}, {3, 4, 2, 0, 40}}},
      {{{10, 0, 0, 0, 0}, {0, 10, 0, 0, 0}, {0, 0, 10, 0, 0}, {0, 0, 0, 10, 0}, {0, 0, 0, 0, 10}}},
      {{{0, 5, 0, 0, 0}, {5, 0, 0, 0, 0}, {0, 0, 0, 7, 0}, {0, 0, 7, 0, 0}, {0, 0, 0, 0, 0}}},
      {{{20, 0, 5, 0, 0}, {0, 0, 0, 0, 0}, {3, 0, 40, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
      {{{1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}}},
      {{{0, 0, 12, 0, 0}, {0, 0, 3, 0, 0}, {0, 0, 30, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 4, 0, 0}}},
      {{{7, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}},
  };
  double worst = 0;
  bool counts_ok = true;
  for (const auto& cs : cases) {
    std::vector<int> t, p;
    for (int i = 0; i < kNumClasses; ++i) {
      for (int j = 0; j < kNumClasses; ++j) {
        for (int c = 0; c < cs[i][j]; ++c) {
          t.push_back(i);
          p.push_back(j);
        }
      }
    }
    // Interleave so the stream order is not the matrix order.
    testing::Rng rng(static_cast<std::uint64_t>(t.size()));
    for (std::size_t i = t.size(); i > 1; --i) {
      const std::size_t j = rng.below(i);
      std::swap(t[i - 1], t[j]);
      std::swap(p[i - 1], p[j]);
    }
    const auto ts = stages_of(t);
    const auto ps = stages_of(p);
    const auto rep = evaluate_predictions(ts, ps);
    for (int i = 0; i < kNumClasses; ++i) {
      for (int j = 0; j < kNumClasses; ++j) counts_ok = counts_ok && rep.confusion.counts[i][j] == cs[i][j];
    }
    const auto bf = brute_force(t, p);
    worst = std::max({worst, std::abs(rep.mf1 - bf.mf1), std::abs(rep.acc - bf.acc),
                      std::abs(rep.kappa - bf.kappa)});
  }
  r.check(counts_ok, "confusion counts");
  r.check(worst <= 1e-15, "metrics differ from brute force");

  ConfusionMatrix perfect;
  for (int i = 0; i < kNumClasses; ++i) perfect.counts[i][i] = 7 + i;
  r.check(cohen_kappa(perfect) == 1.0, "kappa perfect");
  // Outer product of margins (rows 2,4,6,8,10; columns 1,2,3,4,5 out of 15).
  ConfusionMatrix indep;
  for (int i = 0; i < kNumClasses; ++i) {
    for (int j = 0; j < kNumClasses; ++j) indep.counts[i][j] = (2 * (i + 1)) * (j + 1);
  }
  const double k0 = cohen_kappa(indep);
  r.check(std::abs(k0) <= 1e-15, "kappa independent margins");

  std::vector<SleepStage> truth;
  for (int i = 0; i < 25; ++i) truth.push_back(kModelClasses[static_cast<std::size_t>(i % 5)]);
  RowMatrix uniform = RowMatrix::Constant(25, kNumClasses, 0.2);
  const double ll = log_loss(truth, uniform);
  r.check(std::abs(ll - std::log(5.0)) <= 1e-12, "uniform log loss");
  r.note(std::to_string(cases.size()) + " matrices");
  r.note(fmt("max diff %.1e", worst));
  r.note(fmt("kappa indep %.1e", k0));
  r.note(fmt("log loss %.12f", ll));
  return r;
}

// 7. Subject-grouped folds.
Result grouping_checks() {
  Result r;
  const FeatureSchema schema({{"EMG", ChannelKind::kEmg}});
  std::vector<EpochFeatureMatrix> data;
  testing::Rng rng(31);
  for (int s = 0; s < 6; ++s) {
    for (int rec = 0; rec < 2; ++rec) {
      EpochFeatureMatrix m;
      m.subject_id = "subj" + std::to_string(s);
      m.recording_id = m.subject_id + "_night" + std::to_string(rec + 1);
      m.schema = schema;
      m.values.resize(40, static_cast<Eigen::Index>(schema.size()));
      for (Eigen::Index i = 0; i < 40; ++i) {
        const int c = static_cast<int>((i + s + rec) % kNumClasses);
        m.epoch_index.push_back(i);
        m.stages.push_back(kModelClasses[static_cast<std::size_t>(c)]);
        for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
          m.values(i, j) = rng.normal() + (j % kNumClasses == c ? 3.0 : 0.0);
        }
      }
      data.push_back(std::move(m));
    }
  }
  std::vector<std::string> subjects;
  for (const auto& m : data) subjects.push_back(m.subject_id);
  const auto plan = grouped_kfold(subjects, 3);
  const auto result = run_lfs_cv(data, plan);
  std::size_t overlap = 0;
  for (const auto& f : result.folds) {
    for (const auto& s : f.test_subjects) {
      overlap += std::count(f.train_subjects.begin(), f.train_subjects.end(), s);
    }
  }
  r.check(overlap == 0, "subject overlap between train and test");
  std::map<std::string, std::set<int>> folds_of_subject;
  std::map<std::string, std::set<int>> folds_of_recording;
  for (const auto& p : result.predictions) {
    folds_of_subject[p.subject_id].insert(p.fold);
    folds_of_recording[p.recording_id].insert(p.fold);
  }
  bool colocated = folds_of_subject.size() == 6 && folds_of_recording.size() == 12;
  for (const auto& [s, f] : folds_of_subject) colocated = colocated && f.size() == 1;
  r.check(colocated, "subject recordings split across folds");
  std::int64_t tested = 0;
  for (const auto& f : result.folds) tested += f.test_rows;
  r.check(tested == 12 * 40, "every row tested once");
  r.note(std::to_string(result.folds.size()) + " folds");
  r.note("overlap " + std::to_string(overlap));
  r.note(std::string("co-located ") + (colocated ? "yes" : "no"));
  return r;
}

json cli_config(const std::vector<testing::SyntheticFiles>& files, int k) {
  json recs = json::array();
  for (const auto& f : files) {
    recs.push_back({{"psg", f.psg.string()},
                    {"hypnogram", f.hypnogram.string()},
                    {"subject_id", f.subject_id},
                    {"recording_id", f.recording_id}});
  }
  return {{"dataset", {{"name", "synthetic"}, {"recordings", recs}}},
          {"eval", {{"protocol", "LFS"}, {"k", k}}},
          {"output_dir", "out"}};
}

std::vector<fs::path> files_under(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// 8. Full command-line path on synthetic recordings.
Result end_to_end() {
  Result r;
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "somno_acceptance_e2e";
  fs::remove_all(root);
  fs::create_directories(root / "data");
  std::vector<testing::SyntheticFiles> files;
  files.push_back(testing::write_synthetic_recording(
      root / "data", "night_a", "subject_a", testing::synthetic_hypnogram(300, 101), 101,
      testing::HypnogramFormat::kEdfPlus));
  files.push_back(testing::write_synthetic_recording(
      root / "data", "night_b", "subject_b", testing::synthetic_hypnogram(300, 202), 202,
      testing::HypnogramFormat::kCsv));
  std::vector<std::string> reports;
  double acc = 0;
  for (const char* run : {"run1", "run2"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    write_text(dir / "config.json", cli_config(files, 2).dump(2));
    for (const char* cmd : {"extract", "train", "evaluate"}) {
      const auto p = run_process({kCli, cmd, "-c", (dir / "config.json").string()});
      r.check(p.exit_code == 0, std::string(run) + " " + cmd + " exit " +
                                    std::to_string(p.exit_code));
      if (p.exit_code != 0) {
        r.note(p.err.substr(0, 300));
        return r;
      }
    }
    auto report = json::parse(read_text(dir / "out" / "report.json"));
    acc = report["pooled"]["acc"].get<double>();
    report.erase("wall_times");
    reports.push_back(report.dump());
  }
  r.check(acc >= 0.95, "pooled accuracy");
  r.check(reports[0] == reports[1], "report differs between runs");
  const auto a = files_under(root / "run1" / "out");
  const auto b = files_under(root / "run2" / "out");
  r.check(a == b, "output file sets differ");
  std::size_t compared = 0;
  if (a == b) {
    for (const auto& f : a) {
      if (f.filename() == "report.json" || f.extension() == ".log") continue;
      const bool same = read_text(root / "run1" / "out" / f) == read_text(root / "run2" / "out" / f);
      r.check(same, "differs: " + f.string());
      ++compared;
    }
  }
  const double t = seconds_since(t0);
  r.check(t < 120.0, "runtime >= 2 min");
  r.note(fmt("pooled acc %.4f", acc));
  r.note(std::to_string(compared) + " files byte-identical");
  r.note(fmt("%.1f s", t));
  fs::remove_all(root);
  return r;
}

// 9. Public cassette cohort, first 20 subjects, 20-fold subject-wise CV.
Result sleep_edf_benchmark() {
  Result r;
  const char* dir = std::getenv("SLEEP_EDF_DIR");
  if (dir == nullptr || *dir == '\0') {
    r.outcome = Outcome::kSkip;
    r.note("SLEEP_EDF_DIR not set");
    return r;
  }
  const fs::path work = fs::temp_directory_path() / "somno_acceptance_sleep_edf";
  fs::create_directories(work);
  json cfg = {
      {"dataset",
       {{"name", "sleep-edf-sc-20"},
        {"discover",
         {{"directory", fs::absolute(dir).string()},
          {"psg_regex", R"(^(SC4([01]\d)\d)E0-PSG\.edf$)"},
          {"hypnogram_regex", R"(^(SC4[01]\d\d)E.-Hypnogram\.edf$)"}}},
        {"montage", "sleep-edf"},
        {"trim_wake", true}}},
      {"eval", {{"protocol", "LFS"}, {"k", 20}}},
      {"output_dir", (work / "out").string()},
  };
  write_text(work / "config.json", cfg.dump(2));
  for (const char* cmd : {"extract", "evaluate"}) {
    const auto p = run_process({kCli, cmd, "-c", (work / "config.json").string()});
    r.check(p.exit_code == 0, std::string(cmd) + " exit " + std::to_string(p.exit_code));
    if (p.exit_code != 0) {
      r.note(p.err.substr(0, 300));
      return r;
    }
  }
  const auto report = json::parse(read_text(work / "out" / "report.json"));
  const double mf1 = report["pooled"]["mf1"].get<double>();
  const double acc = report["pooled"]["acc"].get<double>();
  const double kappa = report["pooled"]["kappa"].get<double>();
  r.check(std::abs(mf1 - 0.809) <= 0.03, "MF1 outside 0.809 +- 0.03");
  r.check(std::abs(acc - 0.857) <= 0.03, "ACC outside 0.857 +- 0.03");
  r.check(std::abs(kappa - 0.806) <= 0.04, "kappa outside 0.806 +- 0.04");
  r.note(fmt("MF1 %.4f", mf1));
  r.note(fmt("ACC %.4f", acc));
  r.note(fmt("kappa %.4f", kappa));
  return r;
}

// 10. Throughput.
Result throughput() {
  Result r;
  const std::size_t epochs = 12 * 120;
  const double fs = 200;
  const auto stages = testing::synthetic_hypnogram(epochs, 55);
  const auto ch = testing::synthesize_channels(stages, 55, fs, fs);
  Recording raw;
  auto add = [&](const char* label, const std::vector<double>& x) {
    raw.channels.push_back({label, Rational(static_cast<std::int64_t>(fs)), x, std::nullopt});
  };
  add("EEG Fpz-Cz", ch.eeg1);
  add("EEG Pz-Oz", ch.eeg2);
  add("EOG horizontal", ch.eog);
  add("EMG submental", ch.emg);

  const auto t0 = Clock::now();
  const Recording pre = preprocess(derive_channels(raw, Montage::sleep_edf()), PreprocessConfig{});
  const double t_pre = seconds_since(t0);
  const auto t1 = Clock::now();
  const auto m = extract_features(pre, FeatureSchema::standard());
  const double t_ext = seconds_since(t1);
  r.check(m.rows() == static_cast<Eigen::Index>(epochs), "row count");
  r.check(t_pre < 10.0, "preprocessing >= 10 s");
  r.check(t_ext < 60.0, "extraction >= 60 s");

  std::vector<int> y;
  RowMatrix x = blobs(200000, 1048, 5, 60.0, 77, 78, y);
  const auto t2 = Clock::now();
  const auto model = fit_logistic(x, y, 5);
  const double t_fit = seconds_since(t2);
  r.check(t_fit < 300.0, "logistic fit >= 5 min");
  const auto fitted = model.predict(x);
  int correct = 0;
  for (std::size_t i = 0; i < fitted.size(); ++i) correct += fitted[i] == y[i];
  r.note(fmt("preprocess %.2f s", t_pre));
  r.note(fmt("extract %.2f s", t_ext));
  r.note(fmt("fit 200000x1048 %.1f s", t_fit));
  r.note("iterations " + std::to_string(model.iterations) +
         (model.converged ? " (converged)" : " (not converged)"));
  r.note(fmt("training acc %.3f", static_cast<double>(correct) / static_cast<double>(y.size())));
  return r;
}

}  // namespace
}  // namespace somno

int main(int argc, char** argv) {
  using namespace somno;
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"catalog and schema size", catalog_and_schema},
      {"filter and spectral estimates", dsp_checks},
      {"feature spot checks", feature_checks},
      {"quantile transform", quantile_checks},
      {"logistic regression", logistic_checks},
      {"evaluation metrics", metrics_checks},
      {"subject-grouped folds", grouping_checks},
      {"end-to-end command line", end_to_end},
      {"Sleep-EDF SC 20 subjects, 20-fold", sleep_edf_benchmark},
      {"throughput", throughput},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(id)) continue;
    const auto t0 = Clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
    const double t = seconds_since(t0);
    const char* tag = r.outcome == Outcome::kPass   ? "PASS"
                      : r.outcome == Outcome::kSkip ? "SKIP"
                                                    : "FAIL";
    std::string detail;
    for (const auto& d : r.details) detail += (detail.empty() ? "" : "; ") + d;
    for (const auto& f : r.failures) detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + f;
    std::printf("[%s] %2d %s (%.1f s): %s\n", tag, id, criteria[i].first, t, detail.c_str());
    std::fflush(stdout);
    if (r.outcome == Outcome::kFail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
