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

#ifndef SOMNO_QUANTILE_H_
#define SOMNO_QUANTILE_H_

#include <Eigen/Core>

#include "somno/matrix.h"

namespace somno {

inline constexpr int kDefaultQuantiles = 100;

// Per-column map onto [0, 1] through n_quantiles + 1 empirical quantiles
// taken at probabilities 0, 1/n, ..., 1.
class QuantileTransform {
 public:
  QuantileTransform() = default;

  static QuantileTransform fit(const RowMatrix& x, int n_quantiles = kDefaultQuantiles,
                               int workers = 1);
  // `references` is (n_quantiles + 1) x n_features, non-decreasing down
  // each column.
  static QuantileTransform from_references(Eigen::MatrixXd references);

  RowMatrix apply(const RowMatrix& x, int workers = 1) const;
  double apply_one(Eigen::Index column, double value) const;

  int n_quantiles() const { return static_cast<int>(references_.rows()) - 1; }
  Eigen::Index n_features() const { return references_.cols(); }
  const Eigen::MatrixXd& references() const { return references_; }

 private:
  Eigen::MatrixXd references_;  // column-major: one contiguous column each
};

}  // namespace somno

#endif  // SOMNO_QUANTILE_H_
