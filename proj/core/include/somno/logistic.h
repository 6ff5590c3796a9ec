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

#ifndef SOMNO_LOGISTIC_H_
#define SOMNO_LOGISTIC_H_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "somno/matrix.h"
#include "somno/stage.h"

namespace somno {

struct LogisticOptions {
  double l2 = 1.0;
  int max_iterations = 1000;
  // On the largest absolute entry of the gradient of the per-row objective
  // (total objective divided by the number of rows).
  double tolerance = 1e-4;
  int history = 10;
  // Rows per gradient block. Block results are summed in block order, so
  // the fit does not depend on `workers`.
  Eigen::Index block_rows = 512;
  int workers = 1;
};

struct LogisticModel {
  Eigen::MatrixXd weights;  // n_classes x n_features
  Eigen::VectorXd biases;   // -inf for classes absent from training
  int iterations = 0;
  bool converged = false;
  double objective = 0;      // total penalised loss at the solution
  double gradient_max = 0;   // per-row gradient max-norm at the solution

  Eigen::Index n_classes() const { return weights.rows(); }
  Eigen::Index n_features() const { return weights.cols(); }

  RowMatrix scores(const RowMatrix& x) const;
  // Softmax of the affine scores; rows sum to one.
  RowMatrix predict_proba(const RowMatrix& x) const;
  // argmax of the probabilities, earliest class on ties.
  std::vector<int> predict(const RowMatrix& x) const;
};

// Total objective sum_i -log p(y_i | x_i) + (l2 / 2) ||W||^2 with unpenalised
// biases. Fills the gradients when the pointers are non-null.
double logistic_objective(const RowMatrix& x, std::span<const int> y,
                          const Eigen::MatrixXd& weights,
                          const Eigen::VectorXd& biases, double l2,
                          Eigen::MatrixXd* grad_weights, Eigen::VectorXd* grad_biases,
                          Eigen::Index block_rows = 512, int workers = 1);

// Multinomial logistic regression by L-BFGS from zero initialisation.
// `y` holds class indices in [0, n_classes). Classes without training rows
// keep zero weights and a -inf bias.
LogisticModel fit_logistic(const RowMatrix& x, std::span<const int> y,
                           int n_classes, const LogisticOptions& options = {});

// Stage labels to class indices; throws for non-model stages.
std::vector<int> to_class_indices(std::span<const SleepStage> stages);

// Row-wise softmax in place, stable for -inf entries.
void softmax_rows(RowMatrix& scores);

}  // namespace somno

#endif  // SOMNO_LOGISTIC_H_
