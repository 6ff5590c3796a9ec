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

#include "somno/logistic.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "somno/error.h"
#include "somno/parallel.h"

namespace somno {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BlockResult {
  double loss = 0;
  Eigen::MatrixXd grad_w;
  Eigen::VectorXd grad_b;
};

void block_loss(const RowMatrix& x, std::span<const int> y,
                const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                Eigen::Index begin, Eigen::Index rows, bool want_grad,
                BlockResult& out) {
  const auto xb = x.middleRows(begin, rows);
  RowMatrix s = xb * w.transpose();
  s.rowwise() += b.transpose();
  double loss = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    auto row = s.row(r);
    const double m = row.maxCoeff();
    double sum = 0;
    for (Eigen::Index k = 0; k < row.size(); ++k) sum += std::exp(row[k] - m);
    const double lse = m + std::log(sum);
    const int label = y[begin + r];
    loss += lse - row[label];
    if (want_grad) {
      for (Eigen::Index k = 0; k < row.size(); ++k) row[k] = std::exp(row[k] - lse);
      row[label] -= 1.0;
    }
  }
  out.loss = loss;
  if (want_grad) {
    out.grad_w.noalias() = s.transpose() * xb;
    out.grad_b = s.colwise().sum().transpose();
  }
}

// Flattened parameters: weights column-major, then biases.
struct Packing {
  Eigen::Index k, d;
  Eigen::Index size() const { return k * d + k; }
  void unpack(const Eigen::VectorXd& theta, Eigen::MatrixXd& w, Eigen::VectorXd& b) const {
    w = Eigen::Map<const Eigen::MatrixXd>(theta.data(), k, d);
    b = theta.tail(k);
  }
  Eigen::VectorXd pack(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) const {
    Eigen::VectorXd theta(size());
    Eigen::Map<Eigen::MatrixXd>(theta.data(), k, d) = w;
    theta.tail(k) = b;
    return theta;
  }
};

}  // namespace

double logistic_objective(const RowMatrix& x, std::span<const int> y,
                          const Eigen::MatrixXd& weights,
                          const Eigen::VectorXd& biases, double l2,
                          Eigen::MatrixXd* grad_weights, Eigen::VectorXd* grad_biases,
                          Eigen::Index block_rows, int workers) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = weights.rows();
  if (static_cast<Eigen::Index>(y.size()) != n) throw Error("label count differs from row count");
  if (weights.cols() != x.cols() || biases.size() != k) {
    throw Error("logistic parameter shapes do not match the data");
  }
  if (block_rows < 1) block_rows = 1;
  const bool want_grad = grad_weights != nullptr || grad_biases != nullptr;
  const Eigen::Index n_blocks = (n + block_rows - 1) / block_rows;
  Eigen::MatrixXd gw = Eigen::MatrixXd::Zero(k, x.cols());
  Eigen::VectorXd gb = Eigen::VectorXd::Zero(k);
  double loss = 0;

  // Blocks are computed in batches of up to `workers` and reduced in block
  // order, which keeps the result independent of the thread count.
  const int batch = std::max(1, workers);
  std::vector<BlockResult> results(static_cast<std::size_t>(batch));
  for (Eigen::Index first = 0; first < n_blocks; first += batch) {
    const Eigen::Index count = std::min<Eigen::Index>(batch, n_blocks - first);
    parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t i) {
      const Eigen::Index begin = (first + static_cast<Eigen::Index>(i)) * block_rows;
      const Eigen::Index rows = std::min(block_rows, n - begin);
      block_loss(x, y, weights, biases, begin, rows, want_grad, results[i]);
    });
    for (Eigen::Index i = 0; i < count; ++i) {
      loss += results[i].loss;
      if (want_grad) {
        gw += results[i].grad_w;
        gb += results[i].grad_b;
      }
    }
  }
  loss += 0.5 * l2 * weights.squaredNorm();
  if (grad_weights) *grad_weights = gw + l2 * weights;
  if (grad_biases) *grad_biases = gb;
  return loss;
}

std::vector<int> to_class_indices(std::span<const SleepStage> stages) {
  std::vector<int> y;
  y.reserve(stages.size());
  for (SleepStage s : stages) y.push_back(class_index(s));
  return y;
}

LogisticModel fit_logistic(const RowMatrix& x, std::span<const int> y, int n_classes,
                           const LogisticOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n == 0) throw Error("cannot fit logistic regression on zero rows");
  if (static_cast<Eigen::Index>(y.size()) != n) throw Error("label count differs from row count");
  if (!x.allFinite()) throw Error("logistic regression input contains non-finite values");
  if (options.l2 < 0) throw Error("l2 strength must be non-negative");

  // Fit only the classes that occur; the others get probability zero.
  std::vector<int> remap(static_cast<std::size_t>(n_classes), -1);
  std::vector<int> active;
  for (int label : y) {
    if (label < 0 || label >= n_classes) throw Error("class index out of range");
    if (remap[label] < 0) remap[label] = 0;
  }
  for (int c = 0; c < n_classes; ++c) {
    if (remap[c] >= 0) {
      remap[c] = static_cast<int>(active.size());
      active.push_back(c);
    }
  }
  if (active.size() < 2) throw Error("logistic regression needs at least two classes in y");
  std::vector<int> yy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) yy[i] = remap[y[i]];

  const Packing pk{static_cast<Eigen::Index>(active.size()), d};
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd w;
  Eigen::VectorXd b;
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  // Per-row objective and gradient.
  auto evaluate = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    pk.unpack(theta, w, b);
    const double f = logistic_objective(x, yy, w, b, options.l2, &gw, &gb,
                                        options.block_rows, options.workers);
    grad = pk.pack(gw, gb) * inv_n;
    return f * inv_n;
  };

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(pk.size());
  Eigen::VectorXd grad;
  double f = evaluate(theta, grad);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  int iter = 0;
  bool converged = grad.lpNorm<Eigen::Infinity>() <= options.tolerance;
  Eigen::VectorXd theta_new, grad_new;
  while (!converged && iter < options.max_iterations) {
    // Two-loop recursion.
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      q /= std::max(1.0, grad.norm());
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = -q;
    double slope = grad.dot(dir);
    if (!(slope < 0)) {
      // Not a descent direction: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -grad / std::max(1.0, grad.norm());
      slope = grad.dot(dir);
    }
    // Backtracking line search with the Armijo condition.
    double step = 1.0;
    double f_new = 0;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      theta_new = theta + step * dir;
      f_new = evaluate(theta_new, grad_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      // Near the optimum the decrease drops below the rounding of f; fall
      // back to requiring a smaller gradient.
      if (std::isfinite(f_new) && std::abs(f_new - f) <= 1e-14 * std::max(1.0, std::abs(f)) &&
          grad_new.lpNorm<Eigen::Infinity>() < grad.lpNorm<Eigen::Infinity>()) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iter;
    if (!accepted) break;
    Eigen::VectorXd s = theta_new - theta;
    Eigen::VectorXd yv = grad_new - grad;
    const double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    theta.swap(theta_new);
    grad.swap(grad_new);
    f = f_new;
    converged = grad.lpNorm<Eigen::Infinity>() <= options.tolerance;
  }

  pk.unpack(theta, w, b);
  LogisticModel model;
  model.weights = Eigen::MatrixXd::Zero(n_classes, d);
  model.biases = Eigen::VectorXd::Constant(n_classes, -kInf);
  for (std::size_t a = 0; a < active.size(); ++a) {
    model.weights.row(active[a]) = w.row(static_cast<Eigen::Index>(a));
    model.biases[active[a]] = b[static_cast<Eigen::Index>(a)];
  }
  model.iterations = iter;
  model.converged = converged;
  model.objective = f * static_cast<double>(n);
  model.gradient_max = grad.lpNorm<Eigen::Infinity>();
  return model;
}

void softmax_rows(RowMatrix& s) {
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    auto row = s.row(r);
    const double m = row.maxCoeff();
    double sum = 0;
    for (Eigen::Index k = 0; k < row.size(); ++k) {
      row[k] = std::exp(row[k] - m);
      sum += row[k];
    }
    row /= sum;
  }
}

RowMatrix LogisticModel::scores(const RowMatrix& x) const {
  if (x.cols() != n_features()) {
    throw Error("model expects " + std::to_string(n_features()) + " features, got " +
                std::to_string(x.cols()));
  }
  RowMatrix s = x * weights.transpose();
  s.rowwise() += biases.transpose();
  return s;
}

RowMatrix LogisticModel::predict_proba(const RowMatrix& x) const {
  RowMatrix s = scores(x);
  softmax_rows(s);
  return s;
}

std::vector<int> LogisticModel::predict(const RowMatrix& x) const {
  const RowMatrix p = predict_proba(x);
  std::vector<int> out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < p.cols(); ++k) {
      if (p(r, k) > p(r, best)) best = k;
    }
    out[r] = static_cast<int>(best);
  }
  return out;
}

}  // namespace somno
