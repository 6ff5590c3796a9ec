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

#include "somno/pca.h"

#include <Eigen/Eigenvalues>

#include "somno/error.h"

namespace somno {

PcaModel fit_pca(const RowMatrix& x, int n_components) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n_components < 1 || n_components > d) throw Error("invalid number of components");
  if (n <= n_components) {
    throw Error("PCA needs more rows than components (got " + std::to_string(n) + ")");
  }
  if (!x.allFinite()) throw Error("PCA input contains non-finite values");
  PcaModel model;
  model.mean = x.colwise().mean().transpose();
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  constexpr Eigen::Index kBlock = 1024;
  for (Eigen::Index begin = 0; begin < n; begin += kBlock) {
    const Eigen::Index rows = std::min(kBlock, n - begin);
    RowMatrix centred = x.middleRows(begin, rows);
    centred.rowwise() -= model.mean.transpose();
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose());
  }
  scatter.triangularView<Eigen::StrictlyUpper>() = scatter.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
  if (eig.info() != Eigen::Success) throw Error("PCA eigen-decomposition failed");
  // Eigenvalues come back ascending.
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double total = std::max(values.sum(), 0.0);
  const double top = values[d - 1];
  if (!(top > 0) || values[d - n_components] <= 1e-12 * top) {
    throw Error("data has rank below " + std::to_string(n_components) +
                "; PCA is degenerate");
  }
  model.components.resize(n_components, d);
  model.explained_variance.resize(n_components);
  model.explained_variance_ratio.resize(n_components);
  for (int c = 0; c < n_components; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    model.components.row(c) = v.transpose();
    const double lambda = values[d - 1 - c];
    model.explained_variance[c] = lambda / static_cast<double>(n - 1);
    model.explained_variance_ratio[c] = lambda / total;
  }
  return model;
}

RowMatrix PcaModel::project(const RowMatrix& x) const {
  if (x.cols() != mean.size()) {
    throw Error("PCA fitted on " + std::to_string(mean.size()) + " features applied to " +
                std::to_string(x.cols()));
  }
  RowMatrix centred = x.rowwise() - mean.transpose();
  return centred * components.transpose();
}

}  // namespace somno
