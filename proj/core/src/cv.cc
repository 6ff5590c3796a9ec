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

#include "somno/cv.h"

#include <algorithm>
#include <set>

#include "somno/error.h"

namespace somno {
namespace {

void check_dataset(std::span<const EpochFeatureMatrix> data, const std::string& hash) {
  for (const auto& m : data) {
    if (m.schema.hash() != hash) {
      throw Error("recording '" + m.recording_id + "' uses a different feature schema");
    }
    if (m.stages.size() != static_cast<std::size_t>(m.rows())) {
      throw Error("recording '" + m.recording_id + "' lacks one stage per row");
    }
    for (SleepStage s : m.stages) {
      if (!is_model_class(s)) {
        throw Error("recording '" + m.recording_id + "' still contains " +
                    std::string(to_string(s)) + " epochs");
      }
    }
  }
}

struct Stacked {
  RowMatrix x;
  std::vector<SleepStage> y;
  std::vector<const EpochFeatureMatrix*> sources;
};

Stacked stack(const std::vector<const EpochFeatureMatrix*>& parts) {
  Stacked s;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto* m : parts) {
    rows += m->rows();
    cols = m->values.cols();
  }
  s.x.resize(rows, cols);
  Eigen::Index at = 0;
  for (const auto* m : parts) {
    s.x.middleRows(at, m->rows()) = m->values;
    at += m->rows();
    s.y.insert(s.y.end(), m->stages.begin(), m->stages.end());
  }
  s.sources = parts;
  return s;
}

std::vector<std::string> subjects_of(const std::vector<const EpochFeatureMatrix*>& parts) {
  std::set<std::string> set;
  for (const auto* m : parts) set.insert(m->subject_id);
  return {set.begin(), set.end()};
}

// Fits on `train`, predicts `test`, appends prediction rows.
MetricsReport fit_and_score(const std::vector<const EpochFeatureMatrix*>& train,
                            const std::vector<const EpochFeatureMatrix*>& test,
                            const PipelineOptions& options, int fold,
                            FoldSummary& summary, std::vector<PredictionRow>& rows) {
  const Stacked tr = stack(train);
  const Stacked te = stack(test);
  summary.train_rows = tr.x.rows();
  summary.test_rows = te.x.rows();
  if (tr.x.rows() == 0) throw Error("fold " + std::to_string(fold) + " has no training rows");
  if (te.x.rows() == 0) throw Error("fold " + std::to_string(fold) + " has no test rows");
  if (std::set<SleepStage>(tr.y.begin(), tr.y.end()).size() < 2) {
    throw Error("fold " + std::to_string(fold) + " has a single class in its training rows");
  }
  const std::string& hash = train.front()->schema.hash();
  const auto model = LinearPipelineModel::fit(tr.x, tr.y, hash, options);
  summary.optimizer_iterations = model.logistic().iterations;
  summary.optimizer_converged = model.logistic().converged;
  const RowMatrix proba = model.predict_proba(te.x, hash);
  const std::vector<SleepStage> pred = argmax_stages(proba);
  MetricsReport report = evaluate_predictions(te.y, pred, &proba);
  report.fold_id = fold;
  Eigen::Index r = 0;
  for (const auto* m : test) {
    for (Eigen::Index i = 0; i < m->rows(); ++i, ++r) {
      PredictionRow row;
      row.subject_id = m->subject_id;
      row.recording_id = m->recording_id;
      row.epoch_index = m->epoch_index[i];
      row.truth = te.y[r];
      row.pred = pred[r];
      for (int k = 0; k < kNumClasses; ++k) row.proba[k] = proba(r, k);
      row.fold = fold;
      rows.push_back(std::move(row));
    }
  }
  return report;
}

MetricsReport pooled_report(const std::vector<PredictionRow>& rows) {
  std::vector<SleepStage> truth, pred;
  RowMatrix proba(static_cast<Eigen::Index>(rows.size()), kNumClasses);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    truth.push_back(rows[i].truth);
    pred.push_back(rows[i].pred);
    for (int k = 0; k < kNumClasses; ++k) proba(static_cast<Eigen::Index>(i), k) = rows[i].proba[k];
  }
  return evaluate_predictions(truth, pred, &proba);
}

}  // namespace

int FoldPlan::fold(const std::string& subject) const {
  auto it = fold_of.find(subject);
  if (it == fold_of.end()) throw Error("subject '" + subject + "' is not in the fold plan");
  return it->second;
}

std::vector<std::string> FoldPlan::subjects_in(int f) const {
  std::vector<std::string> out;
  for (const auto& [s, g] : fold_of) {
    if (g == f) out.push_back(s);
  }
  return out;
}

FoldPlan grouped_kfold(std::span<const std::string> subjects, int k) {
  std::set<std::string> distinct(subjects.begin(), subjects.end());
  if (k < 1) throw Error("k must be at least 1");
  if (static_cast<std::size_t>(k) > distinct.size()) {
    throw Error("k = " + std::to_string(k) + " exceeds the " +
                std::to_string(distinct.size()) + " distinct subjects");
  }
  FoldPlan plan;
  plan.k = k;
  int i = 0;
  for (const auto& s : distinct) {
    if (s.empty()) throw Error("empty subject id");
    plan.fold_of[s] = i++ % k;
  }
  return plan;
}

EvaluationResult run_lfs_cv(std::span<const EpochFeatureMatrix> dataset,
                            const FoldPlan& plan, const PipelineOptions& options) {
  if (dataset.empty()) throw Error("empty dataset");
  if (plan.k < 2) throw Error("cross-validation needs k >= 2");
  check_dataset(dataset, dataset.front().schema.hash());
  EvaluationResult result;
  result.protocol = "LFS";
  result.k = plan.k;
  for (int f = 0; f < plan.k; ++f) {
    std::vector<const EpochFeatureMatrix*> train, test;
    for (const auto& m : dataset) (plan.fold(m.subject_id) == f ? test : train).push_back(&m);
    FoldSummary summary;
    summary.fold = f;
    summary.train_subjects = subjects_of(train);
    summary.test_subjects = subjects_of(test);
    std::vector<std::string> shared;
    std::set_intersection(summary.train_subjects.begin(), summary.train_subjects.end(),
                          summary.test_subjects.begin(), summary.test_subjects.end(),
                          std::back_inserter(shared));
    if (!shared.empty()) {
      throw Error("subject '" + shared.front() + "' appears in both train and test of fold " +
                  std::to_string(f));
    }
    result.per_fold.push_back(
        fit_and_score(train, test, options, f, summary, result.predictions));
    result.folds.push_back(std::move(summary));
  }
  result.pooled = pooled_report(result.predictions);
  return result;
}

EvaluationResult run_dt(std::span<const EpochFeatureMatrix> train,
                        std::span<const EpochFeatureMatrix> eval,
                        const PipelineOptions& options, const DirectTransferOptions& dt) {
  if (train.empty() || eval.empty()) throw Error("direct transfer needs train and eval data");
  const std::string& hash = train.front().schema.hash();
  check_dataset(train, hash);
  check_dataset(eval, hash);
  const std::set<std::string> excluded(dt.exclude_subjects.begin(), dt.exclude_subjects.end());
  std::vector<const EpochFeatureMatrix*> tr, te;
  for (const auto& m : train) {
    if (!excluded.contains(m.subject_id)) tr.push_back(&m);
  }
  for (const auto& m : eval) te.push_back(&m);
  FoldSummary summary;
  summary.train_subjects = subjects_of(tr);
  summary.test_subjects = subjects_of(te);
  std::vector<std::string> shared;
  std::set_intersection(summary.train_subjects.begin(), summary.train_subjects.end(),
                        summary.test_subjects.begin(), summary.test_subjects.end(),
                        std::back_inserter(shared));
  if (!shared.empty() && !dt.allow_overlap) {
    std::string list;
    for (const auto& s : shared) list += (list.empty() ? "" : ", ") + s;
    throw Error("subjects in both training and evaluation sets: " + list);
  }
  EvaluationResult result;
  result.protocol = "DT";
  result.k = 1;
  result.per_fold.push_back(fit_and_score(tr, te, options, 0, summary, result.predictions));
  result.folds.push_back(std::move(summary));
  result.pooled = result.per_fold.front();
  result.pooled.fold_id.reset();
  return result;
}

}  // namespace somno
