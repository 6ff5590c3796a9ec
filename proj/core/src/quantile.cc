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

#include "somno/quantile.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "somno/error.h"
#include "somno/parallel.h"

namespace somno {

QuantileTransform QuantileTransform::fit(const RowMatrix& x, int n_quantiles,
                                         int workers) {
  if (n_quantiles < 1) throw Error("n_quantiles must be positive");
  if (x.rows() < 2) throw Error("quantile transform needs at least two rows");
  if (!x.allFinite()) throw Error("quantile transform input contains non-finite values");
  const Eigen::Index n = x.rows();
  QuantileTransform qt;
  qt.references_.resize(n_quantiles + 1, x.cols());
  parallel_for(static_cast<std::size_t>(x.cols()), workers, [&](std::size_t c) {
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) col[r] = x(r, static_cast<Eigen::Index>(c));
    std::sort(col.begin(), col.end());
    for (int k = 0; k <= n_quantiles; ++k) {
      // Linear interpolation between order statistics at h = (n - 1) p.
      const double h = static_cast<double>(n - 1) * k / n_quantiles;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const std::size_t hi = std::min<std::size_t>(lo + 1, col.size() - 1);
      const double frac = h - static_cast<double>(lo);
      double v = col[lo] + frac * (col[hi] - col[lo]);
      if (k > 0) v = std::max(v, qt.references_(k - 1, static_cast<Eigen::Index>(c)));
      qt.references_(k, static_cast<Eigen::Index>(c)) = v;
    }
  });
  return qt;
}

QuantileTransform QuantileTransform::from_references(Eigen::MatrixXd references) {
  if (references.rows() < 2 || references.cols() < 1) {
    throw Error("quantile references need at least two rows and one column");
  }
  for (Eigen::Index c = 0; c < references.cols(); ++c) {
    for (Eigen::Index k = 1; k < references.rows(); ++k) {
      if (!(references(k, c) >= references(k - 1, c))) {
        throw Error("quantile references of column " + std::to_string(c) +
                    " are not non-decreasing");
      }
    }
  }
  QuantileTransform qt;
  qt.references_ = std::move(references);
  return qt;
}

double QuantileTransform::apply_one(Eigen::Index column, double value) const {
  const Eigen::Index m = references_.rows();
  const double* ref = references_.col(column).data();
  const double lo_ref = ref[0];
  const double hi_ref = ref[m - 1];
  if (!(hi_ref > lo_ref)) return 0.0;
  if (std::isnan(value)) throw Error("cannot transform NaN");
  if (value <= lo_ref) return 0.0;
  if (value >= hi_ref) return 1.0;
  const double step = 1.0 / static_cast<double>(m - 1);
  const double* first = std::lower_bound(ref, ref + m, value);
  const double* last = std::upper_bound(first, ref + m, value);
  if (first != last) {
    // The value repeats across references: take the midpoint of its run.
    const auto a = first - ref;
    const auto b = (last - ref) - 1;
    return 0.5 * static_cast<double>(a + b) * step;
  }
  const auto i = (last - ref) - 1;  // ref[i] < value < ref[i + 1]
  const double t = (value - ref[i]) / (ref[i + 1] - ref[i]);
  return (static_cast<double>(i) + t) * step;
}

RowMatrix QuantileTransform::apply(const RowMatrix& x, int workers) const {
  if (x.cols() != n_features()) {
    throw Error("quantile transform fitted on " + std::to_string(n_features()) +
                " columns applied to " + std::to_string(x.cols()));
  }
  RowMatrix out(x.rows(), x.cols());
  parallel_for(static_cast<std::size_t>(x.rows()), workers, [&](std::size_t r) {
    const auto row = static_cast<Eigen::Index>(r);
    for (Eigen::Index c = 0; c < x.cols(); ++c) out(row, c) = apply_one(c, x(row, c));
  });
  return out;
}

}  // namespace somno
