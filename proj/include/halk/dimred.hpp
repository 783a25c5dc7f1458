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

#include <Eigen/Dense>

#include "halk/common.hpp"

namespace halk {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PcaResult {
  DenseMatrix projected;             // n x target_dim
  DenseMatrix components;            // m x target_dim, unit columns
  Eigen::VectorXd explained_variance;  // non-increasing
  double total_variance = 0;         // trace of the sample covariance
};

/// Principal component analysis through the sample covariance (1/(n-1)) and
/// a symmetric eigendecomposition. Columns are centered, not scaled. Each
/// component's sign is chosen so its largest-magnitude loading is positive.
inline PcaResult pca(const DenseMatrix& x, std::size_t target_dim) {
  const auto n = x.rows();
  const auto m = x.cols();
  if (n < 1 || m < 1) throw Error("pca: empty input");
  if (target_dim < 1 || target_dim > static_cast<std::size_t>(std::min(n, m)))
    throw ConfigError("pca: target_dim must be in [1, min(rows, cols)]");
  if (!x.allFinite()) throw Error("pca: non-finite input");

  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");

  const auto k = static_cast<Eigen::Index>(target_dim);
  PcaResult r;
  r.total_variance = cov.trace();
  r.components.resize(m, k);
  r.explained_variance.resize(k);
  // Eigen sorts eigenvalues ascending.
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::Index src = m - 1 - c;
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    r.components.col(c) = v;
    r.explained_variance(c) = std::max(0.0, eig.eigenvalues()(src));
  }
  r.projected = centered * r.components;
  return r;
}

}  // namespace halk
