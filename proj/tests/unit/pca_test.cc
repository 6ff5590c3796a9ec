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

#include <cmath>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "somno/error.h"
#include "somno/pca.h"
#include "synthetic.h"

namespace somno {
namespace {

RowMatrix correlated(int n, int d, std::uint64_t seed) {
  testing::Rng rng(seed);
  Eigen::MatrixXd mix(d, d);
  for (Eigen::Index i = 0; i < mix.size(); ++i) mix.data()[i] = rng.normal();
  RowMatrix z(n, d);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal();
  RowMatrix x = z * mix;
  x.col(0).array() += 3.0;
  return x;
}

TEST(Pca, MatchesSvdOfCentredData) {
  const auto x = correlated(300, 7, 3);
  const auto model = fit_pca(x, 2);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXd v = svd.matrixV().col(k);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    EXPECT_LT((model.components.row(k).transpose() - v).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(model.explained_variance(k), sv(k) * sv(k) / 299.0, 1e-9);
  }
  EXPECT_NEAR(model.explained_variance_ratio(0), sv(0) * sv(0) / sv.squaredNorm(), 1e-12);
  EXPECT_GE(model.explained_variance(0), model.explained_variance(1));
  EXPECT_LT((model.mean - mean.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pca, ProjectionIsCentredAndOrthonormal) {
  const auto x = correlated(200, 5, 9);
  const auto model = fit_pca(x);
  const Eigen::MatrixXd gram = model.components * model.components.transpose();
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  const auto p = model.project(x);
  ASSERT_EQ(p.cols(), 2);
  EXPECT_LT(p.colwise().mean().cwiseAbs().maxCoeff(), 1e-10);
  const double var0 = p.col(0).squaredNorm() / 199.0;
  EXPECT_NEAR(var0, model.explained_variance(0), 1e-9);
}

TEST(Pca, SignConventionIsStable) {
  const auto x = correlated(100, 4, 12);
  RowMatrix flipped = -x;
  const auto a = fit_pca(x);
  const auto b = fit_pca(flipped);
  EXPECT_LT((a.components - b.components).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Pca, RankDeficientInputThrows) {
  RowMatrix line(50, 3);
  for (int i = 0; i < 50; ++i) line.row(i) << i, 2.0 * i, -i;
  EXPECT_THROW(fit_pca(line, 2), Error);
  EXPECT_THROW(fit_pca(RowMatrix::Zero(1, 3), 2), Error);
}

}  // namespace
}  // namespace somno
