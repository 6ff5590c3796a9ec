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

#ifndef SOMNO_METRICS_H_
#define SOMNO_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "somno/matrix.h"
#include "somno/stage.h"

namespace somno {

// Rows are true classes, columns predicted classes, both in model-class
// order (W, N1, N2, N3, REM).
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};

  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(int k) const;
  std::int64_t col_sum(int k) const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const SleepStage> truth,
                                 std::span<const SleepStage> pred);

double accuracy(const ConfusionMatrix& cm);
// F1 per class; 0 for a class that is neither true nor predicted.
std::array<double, kNumClasses> per_class_f1(const ConfusionMatrix& cm);
// Mean F1 over the classes that occur in the truth or the predictions.
double macro_f1(const ConfusionMatrix& cm);
// 0 when the expected agreement is 1.
double cohen_kappa(const ConfusionMatrix& cm);
// Mean -ln p(true class) with probabilities clipped to [1e-15, 1 - 1e-15].
// `proba` columns follow model-class order.
double log_loss(std::span<const SleepStage> truth, const RowMatrix& proba);

struct MetricsReport {
  double mf1 = 0;
  double acc = 0;
  double kappa = 0;
  std::optional<double> log_loss;
  std::array<double, kNumClasses> per_class_f1{};
  ConfusionMatrix confusion;
  std::int64_t n_epochs = 0;
  std::optional<int> fold_id;
};

MetricsReport evaluate_predictions(std::span<const SleepStage> truth,
                                   std::span<const SleepStage> pred,
                                   const RowMatrix* proba = nullptr);

}  // namespace somno

#endif  // SOMNO_METRICS_H_
