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

#ifndef SOMNO_CV_H_
#define SOMNO_CV_H_

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "somno/metrics.h"
#include "somno/pipeline.h"
#include "somno/windowing.h"

namespace somno {

struct FoldPlan {
  int k = 0;
  std::map<std::string, int> fold_of;  // subject id -> fold

  int fold(const std::string& subject) const;
  std::vector<std::string> subjects_in(int fold) const;
};

// Distinct subjects sorted lexicographically and dealt round-robin onto
// folds 0..k-1. k equal to the subject count gives leave-one-subject-out.
FoldPlan grouped_kfold(std::span<const std::string> subjects, int k);

struct PredictionRow {
  std::string subject_id;
  std::string recording_id;
  std::int64_t epoch_index = 0;
  SleepStage truth = SleepStage::kUnknown;
  SleepStage pred = SleepStage::kUnknown;
  std::array<double, kNumClasses> proba{};
  int fold = 0;
};

struct FoldSummary {
  int fold = 0;
  std::vector<std::string> train_subjects;
  std::vector<std::string> test_subjects;
  std::int64_t train_rows = 0;
  std::int64_t test_rows = 0;
  int optimizer_iterations = 0;
  bool optimizer_converged = false;
};

struct EvaluationResult {
  std::string protocol;  // "LFS" or "DT"
  int k = 0;
  std::vector<MetricsReport> per_fold;
  std::vector<FoldSummary> folds;
  MetricsReport pooled;
  std::vector<PredictionRow> predictions;
};

// Learning from scratch: for each fold, fit on the other folds' rows and
// score the fold's rows; the pooled report scores all test predictions
// together. Every matrix needs one model-class stage per row and the same
// schema.
EvaluationResult run_lfs_cv(std::span<const EpochFeatureMatrix> dataset,
                            const FoldPlan& plan, const PipelineOptions& options = {});

struct DirectTransferOptions {
  // Subjects dropped from the training set before fitting.
  std::vector<std::string> exclude_subjects;
  // Allow subjects present in both sets (otherwise an error).
  bool allow_overlap = false;
};

// Direct transfer: one fit on all training rows, one evaluation on all
// evaluation rows.
EvaluationResult run_dt(std::span<const EpochFeatureMatrix> train,
                        std::span<const EpochFeatureMatrix> eval,
                        const PipelineOptions& options = {},
                        const DirectTransferOptions& dt = {});

}  // namespace somno

#endif  // SOMNO_CV_H_
