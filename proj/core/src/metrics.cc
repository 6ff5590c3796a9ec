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

#include "somno/metrics.h"

#include <algorithm>
#include <cmath>

#include "somno/error.h"

namespace somno {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    for (std::int64_t v : row) t += v;
  }
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (int k = 0; k < kNumClasses; ++k) t += counts[k][k];
  return t;
}

std::int64_t ConfusionMatrix::row_sum(int k) const {
  std::int64_t t = 0;
  for (std::int64_t v : counts[k]) t += v;
  return t;
}

std::int64_t ConfusionMatrix::col_sum(int k) const {
  std::int64_t t = 0;
  for (const auto& row : counts) t += row[k];
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  for (int i = 0; i < kNumClasses; ++i) {
    for (int j = 0; j < kNumClasses; ++j) counts[i][j] += o.counts[i][j];
  }
  return *this;
}

ConfusionMatrix confusion_matrix(std::span<const SleepStage> truth,
                                 std::span<const SleepStage> pred) {
  if (truth.size() != pred.size()) {
    throw Error("truth and prediction lengths differ (" + std::to_string(truth.size()) +
                " vs " + std::to_string(pred.size()) + ")");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++cm.counts[class_index(truth[i])][class_index(pred[i])];
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw Error("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(n);
}

std::array<double, kNumClasses> per_class_f1(const ConfusionMatrix& cm) {
  std::array<double, kNumClasses> f1{};
  for (int k = 0; k < kNumClasses; ++k) {
    const auto tp = cm.counts[k][k];
    const auto denom = cm.row_sum(k) + cm.col_sum(k);  // 2 tp + fp + fn
    f1[k] = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  return f1;
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error("macro F1 of an empty confusion matrix");
  const auto f1 = per_class_f1(cm);
  double sum = 0;
  int present = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    if (cm.row_sum(k) + cm.col_sum(k) == 0) continue;
    sum += f1[k];
    ++present;
  }
  return sum / present;
}

double cohen_kappa(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw Error("kappa of an empty confusion matrix");
  const double nn = static_cast<double>(n);
  const double po = static_cast<double>(cm.trace()) / nn;
  double pe = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    pe += (static_cast<double>(cm.row_sum(k)) / nn) * (static_cast<double>(cm.col_sum(k)) / nn);
  }
  if (pe >= 1.0) return 0.0;
  return (po - pe) / (1.0 - pe);
}

double log_loss(std::span<const SleepStage> truth, const RowMatrix& proba) {
  if (truth.empty()) throw Error("log loss of an empty label set");
  if (proba.rows() != static_cast<Eigen::Index>(truth.size()) || proba.cols() != kNumClasses) {
    throw Error("probability matrix shape does not match the labels");
  }
  constexpr double kEps = 1e-15;
  double sum = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double p = std::clamp(proba(static_cast<Eigen::Index>(i), class_index(truth[i])),
                                kEps, 1.0 - kEps);
    sum -= std::log(p);
  }
  return sum / static_cast<double>(truth.size());
}

MetricsReport evaluate_predictions(std::span<const SleepStage> truth,
                                   std::span<const SleepStage> pred, const RowMatrix* proba) {
  MetricsReport r;
  r.confusion = confusion_matrix(truth, pred);
  r.n_epochs = r.confusion.total();
  r.acc = accuracy(r.confusion);
  r.mf1 = macro_f1(r.confusion);
  r.kappa = cohen_kappa(r.confusion);
  r.per_class_f1 = per_class_f1(r.confusion);
  if (proba) r.log_loss = log_loss(truth, *proba);
  return r;
}

}  // namespace somno
