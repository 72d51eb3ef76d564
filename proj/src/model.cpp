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

#include "hgpr/model.hpp"

#include <cmath>
#include <numbers>

#include "hgpr/error.hpp"

namespace hgpr {

Vector JointGaussian::full_mean() const {
  Vector m(mu_delta.size() + mu_y.size());
  m << mu_delta, mu_y;
  return m;
}

Matrix JointGaussian::full_covariance() const {
  const auto j = lambda11.rows();
  const auto n = lambda22.rows();
  Matrix c(j + n, j + n);
  c.topLeftCorner(j, j) = lambda11;
  c.topRightCorner(j, n) = lambda12;
  c.bottomLeftCorner(n, j) = lambda12.transpose();
  c.bottomRightCorner(n, n) = lambda22;
  return c;
}

JointGaussian assemble_joint(const JointComponents& c, const Theta& theta) {
  const auto n = c.kg.rows();
  const auto j = c.kdelta.rows();
  const auto n_plus = c.h.rows();
  if (c.kg.cols() != n || c.d.rows() != n || c.d.cols() != n ||
      c.sigma.size() != n || c.kdelta.cols() != j || c.h.cols() != j ||
      n_plus > n || theta.num_groups() != j) {
    throw Error(ErrorCategory::kInvalidArgument,
                "assemble_joint: component dimensions disagree");
  }

  JointGaussian jg;
  jg.mu_delta = Vector::Constant(j, theta.mu);
  jg.mu_y = Vector::Zero(n);
  jg.mu_y.tail(n_plus).setConstant(theta.mu);

  jg.lambda11 = c.kdelta;
  jg.lambda12 = Matrix::Zero(j, n);
  jg.lambda12.rightCols(n_plus) = c.kdelta * c.h.transpose();

  jg.lambda22 = c.kg + c.d;
  jg.lambda22.diagonal() += c.sigma;
  jg.lambda22.bottomRightCorner(n_plus, n_plus) +=
      c.h * c.kdelta * c.h.transpose();
  return jg;
}

double log_marginal(const Vector& y, const JointGaussian& jg) {
  if (y.size() != jg.mu_y.size() || jg.lambda22.rows() != y.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "log_marginal: dimension mismatch");
  }
  const SpdFactor factor(jg.lambda22);
  return mvn_log_density(y, jg.mu_y, factor);
}

double half_cauchy_log_density(double x, double scale) {
  const double u = x / scale;
  return std::log(2.0 / (std::numbers::pi * scale)) - std::log1p(u * u);
}

double log_prior(const Theta& theta, const PriorConfig& prior) {
  theta.validate();
  prior.validate();
  double lp = 0.0;
  for (std::size_t k = 1; k < theta.dimension(); ++k) {
    lp += half_cauchy_log_density(theta.get(k), prior.cauchy_scale);
  }
  const double s = prior.mu_sd;
  lp += -0.5 * std::log(2.0 * std::numbers::pi * s * s) -
        0.5 * (theta.mu / s) * (theta.mu / s);
  return lp;
}

DeltaPosterior delta_conditional(const JointGaussian& jg, const Vector& y) {
  if (y.size() != jg.mu_y.size() || jg.lambda12.cols() != y.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "delta_conditional: dimension mismatch");
  }
  const SpdFactor factor(jg.lambda22);
  const Matrix w = factor.half_solve(Matrix(jg.lambda12.transpose()));
  const Vector v = factor.half_solve(Vector(y - jg.mu_y));
  DeltaPosterior post;
  post.mean = jg.mu_delta + w.transpose() * v;
  post.cov = jg.lambda11 - w.transpose() * w;
  symmetrize(post.cov);
  return post;
}

}  // namespace hgpr
