// Copyright 2026 The halk Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "halk/common.hpp"
#include "halk/dimred.hpp"

namespace halk {

struct LogRegOptions {
  double l2 = 1.0;  // penalty (l2/2)*||w||^2 on weights; the bias is not penalized
  std::size_t max_iter = 100;
  double tol = 1e-5;  // Euclidean norm of the gradient
};

namespace detail {

inline double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
inline double logistic(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace detail

/// Sum of logistic losses plus (l2/2)*||w||^2.
inline double logistic_objective(const DenseMatrix& x, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w, double b, double l2) {
  const Eigen::VectorXd z = (x * w).array() + b;
  double f = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) f += detail::log1p_exp(z(i)) - y(i) * z(i);
  return f + 0.5 * l2 * w.squaredNorm();
}

struct BinaryLogReg {
  Eigen::VectorXd weights;
  double bias = 0;
  // >= 0 when the class had a single outcome in training; the model then
  // predicts this prior for every sample.
  double constant = -1;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;

  Eigen::VectorXd decision(const DenseMatrix& x) const {
    if (constant >= 0) return Eigen::VectorXd::Constant(x.rows(), constant);
    return (x * weights).array() + bias;
  }
  Eigen::VectorXd predict_proba(const DenseMatrix& x) const {
    if (constant >= 0) return Eigen::VectorXd::Constant(x.rows(), constant);
    Eigen::VectorXd z = decision(x);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = detail::logistic(z(i));
    return z;
  }
};

/// L2-regularized logistic regression by damped Newton steps with
/// backtracking, so the objective never increases between iterations.
/// `y` holds 0/1 targets.
inline BinaryLogReg fit_logreg(const DenseMatrix& x, const Eigen::VectorXd& y,
                               const LogRegOptions& opt) {
  const Eigen::Index n = x.rows(), d = x.cols();
  if (n == 0) throw Error("fit_logreg: no samples");
  if (y.size() != n) throw Error("fit_logreg: label count mismatch");
  BinaryLogReg m;
  const double pos = y.sum();
  if (pos == 0 || pos == static_cast<double>(n)) {
    m.constant = pos / static_cast<double>(n);
    m.weights = Eigen::VectorXd::Zero(d);
    m.converged = true;
    return m;
  }

  Eigen::MatrixXd xt(n, d + 1);  // design with a bias column
  xt.leftCols(d) = x;
  xt.col(d).setOnes();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
  const double prior = pos / static_cast<double>(n);
  theta(d) = std::log(prior / (1 - prior));

  auto objective = [&](const Eigen::VectorXd& t) {
    return logistic_objective(x, y, t.head(d), t(d), opt.l2);
  };
  double f = objective(theta);
  m.objective_history.push_back(f);

  Eigen::VectorXd p(n), grad(d + 1);
  Eigen::MatrixXd h(d + 1, d + 1);
  Eigen::MatrixXd scaled(n, d + 1);
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    const Eigen::VectorXd z = xt * theta;
    for (Eigen::Index i = 0; i < n; ++i) p(i) = detail::logistic(z(i));
    grad = xt.transpose() * (p - y);
    grad.head(d) += opt.l2 * theta.head(d);
    if (grad.norm() < opt.tol) {
      m.converged = true;
      break;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      scaled.row(i) = xt.row(i) * std::sqrt(std::max(p(i) * (1 - p(i)), 1e-12));
    h.setZero();
    h.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    h.diagonal().head(d).array() += opt.l2;
    h.diagonal().array() += 1e-10;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h.selfadjointView<Eigen::Lower>());
    Eigen::VectorXd step = -ldlt.solve(grad);
    if (!step.allFinite() || grad.dot(step) >= 0) step = -grad;

    double t = 1.0, f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      f_new = objective(theta + t * step);
      if (f_new <= f + 1e-4 * t * grad.dot(step)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++m.iterations;
    if (!accepted) break;  // no representable decrease left
    theta += t * step;
    const double prev = f;
    f = f_new;
    m.objective_history.push_back(f);
    if (prev - f <= 1e-15 * std::max(1.0, std::abs(f))) {
      m.converged = grad.norm() < opt.tol;
      break;
    }
  }
  m.weights = theta.head(d);
  m.bias = theta(d);
  return m;
}

/// One binary model per class.
struct OvrClassifier {
  std::vector<BinaryLogReg> per_class;

  std::size_t num_classes() const { return per_class.size(); }

  /// n x C matrix of per-class probabilities.
  DenseMatrix scores(const DenseMatrix& x) const {
    DenseMatrix s(x.rows(), static_cast<Eigen::Index>(per_class.size()));
    for (std::size_t c = 0; c < per_class.size(); ++c)
      s.col(static_cast<Eigen::Index>(c)) = per_class[c].predict_proba(x);
    return s;
  }
};

/// `labels[i]` is the class set of row i. A class without positive (or
/// without negative) training rows falls back to its prior.
inline OvrClassifier train_logreg_ovr(const DenseMatrix& x,
                                      const std::vector<std::vector<int>>& labels,
                                      std::size_t num_classes, const LogRegOptions& opt) {
  if (static_cast<std::size_t>(x.rows()) != labels.size())
    throw Error("train_logreg_ovr: one label set per row required");
  OvrClassifier clf;
  for (std::size_t c = 0; c < num_classes; ++c) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.rows());
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (std::find(labels[i].begin(), labels[i].end(), static_cast<int>(c)) != labels[i].end())
        y(static_cast<Eigen::Index>(i)) = 1.0;
    clf.per_class.push_back(fit_logreg(x, y, opt));
    if (clf.per_class.back().constant == 0.0)
      std::clog << "logreg: class " << c << " has no positive training rows; predicting prior\n";
  }
  return clf;
}

/// For each row the k highest-scoring classes (ties to the lower class id),
/// returned in ascending class order.
inline std::vector<std::vector<int>> predict_top_k(const DenseMatrix& scores,
                                                   std::span<const std::size_t> k_per_sample) {
  if (static_cast<std::size_t>(scores.rows()) != k_per_sample.size())
    throw Error("predict_top_k: one k per row required");
  const auto c = static_cast<std::size_t>(scores.cols());
  std::vector<std::vector<int>> out(k_per_sample.size());
  std::vector<int> order(c);
  for (std::size_t i = 0; i < k_per_sample.size(); ++i) {
    const std::size_t k = k_per_sample[i];
    if (k > c) throw Error("predict_top_k: k exceeds the number of classes");
    std::iota(order.begin(), order.end(), 0);
    const auto row = static_cast<Eigen::Index>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores(row, a) > scores(row, b); });
    out[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

}  // namespace halk
