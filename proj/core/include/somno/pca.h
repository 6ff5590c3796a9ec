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

#ifndef SOMNO_PCA_H_
#define SOMNO_PCA_H_

#include <Eigen/Core>

#include "somno/matrix.h"

namespace somno {

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;           // n_components x n_features, orthonormal rows
  Eigen::VectorXd explained_variance;   // non-increasing, unbiased (n - 1)
  Eigen::VectorXd explained_variance_ratio;

  RowMatrix project(const RowMatrix& x) const;
};

// Principal axes of the centred data from the eigen-decomposition of its
// scatter matrix. Each component is signed so that its largest-magnitude
// loading is positive. Throws when the data has rank below n_components.
PcaModel fit_pca(const RowMatrix& x, int n_components = 2);

}  // namespace somno

#endif  // SOMNO_PCA_H_
