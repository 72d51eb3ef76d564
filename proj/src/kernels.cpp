/*
 * Copyright 2026 The hgpr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hgpr/kernels.hpp"

#include <cmath>

#include "hgpr/error.hpp"

namespace hgpr {

double se_eval(double x, double y, const SEParams& p) {
  const double d = x - y;
  return p.variance * std::exp(-0.5 * p.inv_sq_lengthscale * d * d);
}

Matrix se_matrix(const Vector& xs, const Vector& ys, const SEParams& p) {
  Matrix out(xs.size(), ys.size());
  for (Eigen::Index j = 0; j < ys.size(); ++j) {
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      out(i, j) = se_eval(xs[i], ys[j], p);
    }
  }
  return out;
}

Matrix kdelta_matrix(int num_groups, const SEParams& p, KdeltaMode mode) {
  if (mode == KdeltaMode::kDiagonal) {
    return p.variance * Matrix::Identity(num_groups, num_groups);
  }
  const Vector index = Vector::LinSpaced(num_groups, 1.0, num_groups);
  return se_matrix(index, index, p);
}

JointComponents build_components(const GroupedDataset& data,
                                 const Theta& theta, KdeltaMode mode) {
  const int num_groups = data.num_groups();
  if (theta.num_groups() != num_groups) {
    throw Error(ErrorCategory::kInvalidArgument,
                "theta and dataset disagree on the number of groups");
  }
  theta.validate();
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto n_minus = static_cast<Eigen::Index>(data.n_control());
  const auto n_plus = n - n_minus;
  const Vector& z = data.z();
  const auto& group = data.group();

  JointComponents c;
  c.kg = se_matrix(z, z, theta.g_kernel);

  c.d = Matrix::Zero(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (group[static_cast<std::size_t>(k)] == group[static_cast<std::size_t>(l)]) {
        c.d(k, l) = se_eval(z[k], z[l], theta.f_kernel);
      }
    }
  }

  c.kdelta = kdelta_matrix(num_groups, theta.delta_kernel, mode);

  c.h = Matrix::Zero(n_plus, num_groups);
  for (Eigen::Index i = 0; i < n_plus; ++i) {
    c.h(i, group[static_cast<std::size_t>(n_minus + i)]) = 1.0;
  }

  c.sigma.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = group[static_cast<std::size_t>(i)];
    c.sigma[i] = i < n_minus ? theta.sigma_minus_sq[g] : theta.sigma_plus_sq[g];
  }
  return c;
}

}  // namespace hgpr
