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

#include "hgpr/likelihood_cache.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hgpr/error.hpp"

namespace hgpr {

namespace {

Matrix unit_se(const Matrix& sqdist, double inv_sq) {
  return (-0.5 * inv_sq * sqdist.array()).exp().matrix();
}

}  // namespace

LikelihoodCache::LikelihoodCache(const GroupedDataset& data,
                                 const Theta& theta, KdeltaMode mode)
    : y_(data.y()),
      group_(data.group()),
      n_minus_(static_cast<Eigen::Index>(data.n_control())),
      mode_(mode),
      theta_(theta) {
  if (theta.num_groups() != data.num_groups()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "theta and dataset disagree on the number of groups");
  }
  theta_.validate();
  const Vector& z = data.z();
  const auto n = z.size();
  sqdist_.resize(n, n);
  sqdist_group_.resize(n, n);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double d = z[k] - z[l];
      sqdist_(k, l) = d * d;
      sqdist_group_(k, l) =
          group_[static_cast<std::size_t>(k)] == group_[static_cast<std::size_t>(l)]
              ? d * d
              : kInf;
    }
  }
  eg_ = unit_se(sqdist_, theta_.g_kernel.inv_sq_lengthscale);
  ef_ = unit_se(sqdist_group_, theta_.f_kernel.inv_sq_lengthscale);
  ed_ = unit_delta(theta_.delta_kernel.inv_sq_lengthscale);
  sigma_ = noise_vector(theta_);
  factor_ = std::make_shared<const SpdFactor>(
      assemble_lambda22(theta_, eg_, ef_, ed_, sigma_));
  log_marginal_ = evaluate_log_marginal(*factor_, theta_.mu);
}

Matrix LikelihoodCache::unit_delta(double inv_sq) const {
  const int j = theta_.num_groups();
  if (mode_ == KdeltaMode::kDiagonal) return Matrix::Identity(j, j);
  Matrix e(j, j);
  for (int b = 0; b < j; ++b) {
    for (int a = 0; a < j; ++a) {
      const double d = static_cast<double>(a - b);
      e(a, b) = std::exp(-0.5 * inv_sq * d * d);
    }
  }
  return e;
}

Vector LikelihoodCache::noise_vector(const Theta& theta) const {
  const auto n = y_.size();
  Vector s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = group_[static_cast<std::size_t>(i)];
    s[i] = i < n_minus_ ? theta.sigma_minus_sq[g] : theta.sigma_plus_sq[g];
  }
  return s;
}

Matrix LikelihoodCache::assemble_lambda22(const Theta& theta, const Matrix& eg,
                                          const Matrix& ef, const Matrix& ed,
                                          const Vector& sigma) const {
  const auto n = y_.size();
  Matrix lambda = theta.g_kernel.variance * eg + theta.f_kernel.variance * ef;
  lambda.diagonal() += sigma;
  const double r_delta = theta.delta_kernel.variance;
  for (Eigen::Index l = n_minus_; l < n; ++l) {
    const int gl = group_[static_cast<std::size_t>(l)];
    for (Eigen::Index k = n_minus_; k < n; ++k) {
      lambda(k, l) += r_delta * ed(group_[static_cast<std::size_t>(k)], gl);
    }
  }
  return lambda;
}

double LikelihoodCache::evaluate_log_marginal(const SpdFactor& factor,
                                              double mu) const {
  Vector r = y_;
  r.tail(y_.size() - n_minus_).array() -= mu;
  const double n = static_cast<double>(y_.size());
  return -0.5 * (factor.quad_form(r) + factor.log_det() +
                 n * std::log(2.0 * std::numbers::pi));
}

LikelihoodCache::Candidate LikelihoodCache::evaluate(std::size_t coord,
                                                     double value) const {
  Candidate c;
  c.theta_ = theta_;
  c.coord_ = coord;
  c.theta_.set(coord, value);
  if (is_positive_coordinate(coord) && !(value > 0.0 && std::isfinite(value))) {
    throw Error(ErrorCategory::kInvalidArgument,
                "candidate leaves the parameter space");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCategory::kInvalidArgument, "candidate is not finite");
  }

  const CoordinateRef ref = classify_coordinate(coord, theta_.num_groups());
  const Matrix* eg = &eg_;
  const Matrix* ef = &ef_;
  const Matrix* ed = &ed_;
  const Vector* sigma = &sigma_;
  switch (ref.kind) {
    case CoordinateKind::kMu:
      c.factor_ = factor_;
      c.log_marginal_ = evaluate_log_marginal(*factor_, value);
      return c;
    case CoordinateKind::kSigmaMinus:
    case CoordinateKind::kSigmaPlus:
      c.sigma_ = noise_vector(c.theta_);
      sigma = &*c.sigma_;
      break;
    case CoordinateKind::kGInvSq:
      c.unit_ = unit_se(sqdist_, value);
      eg = &*c.unit_;
      break;
    case CoordinateKind::kFInvSq:
      c.unit_ = unit_se(sqdist_group_, value);
      ef = &*c.unit_;
      break;
    case CoordinateKind::kDeltaInvSq:
      c.unit_ = unit_delta(value);
      ed = &*c.unit_;
      break;
    case CoordinateKind::kDeltaVariance:
    case CoordinateKind::kFVariance:
    case CoordinateKind::kGVariance:
      break;
  }
  c.factor_ = std::make_shared<const SpdFactor>(
      assemble_lambda22(c.theta_, *eg, *ef, *ed, *sigma));
  c.log_marginal_ = evaluate_log_marginal(*c.factor_, c.theta_.mu);
  return c;
}

void LikelihoodCache::commit(Candidate&& c) {
  const CoordinateRef ref = classify_coordinate(c.coord_, theta_.num_groups());
  if (c.unit_) {
    switch (ref.kind) {
      case CoordinateKind::kGInvSq: eg_ = std::move(*c.unit_); break;
      case CoordinateKind::kFInvSq: ef_ = std::move(*c.unit_); break;
      case CoordinateKind::kDeltaInvSq: ed_ = std::move(*c.unit_); break;
      default: break;
    }
  }
  if (c.sigma_) sigma_ = std::move(*c.sigma_);
  theta_ = std::move(c.theta_);
  factor_ = std::move(c.factor_);
  log_marginal_ = c.log_marginal_;
}

DeltaPosterior LikelihoodCache::delta_posterior() const {
  const int j = theta_.num_groups();
  const auto n = y_.size();
  const double r_delta = theta_.delta_kernel.variance;
  Matrix lambda21 = Matrix::Zero(n, j);
  for (Eigen::Index i = n_minus_; i < n; ++i) {
    lambda21.row(i) = r_delta * ed_.row(group_[static_cast<std::size_t>(i)]);
  }
  Vector r = y_;
  r.tail(n - n_minus_).array() -= theta_.mu;
  const Matrix w = factor_->half_solve(lambda21);
  const Vector v = factor_->half_solve(r);
  DeltaPosterior post;
  post.mean = Vector::Constant(j, theta_.mu) + w.transpose() * v;
  post.cov = r_delta * ed_ - w.transpose() * w;
  symmetrize(post.cov);
  return post;
}

JointGaussian LikelihoodCache::joint() const {
  const int j = theta_.num_groups();
  const auto n = y_.size();
  JointGaussian jg;
  jg.mu_delta = Vector::Constant(j, theta_.mu);
  jg.mu_y = Vector::Zero(n);
  jg.mu_y.tail(n - n_minus_).setConstant(theta_.mu);
  jg.lambda11 = theta_.delta_kernel.variance * ed_;
  jg.lambda12 = Matrix::Zero(j, n);
  for (Eigen::Index i = n_minus_; i < n; ++i) {
    jg.lambda12.col(i) =
        theta_.delta_kernel.variance * ed_.col(group_[static_cast<std::size_t>(i)]);
  }
  jg.lambda22 = assemble_lambda22(theta_, eg_, ef_, ed_, sigma_);
  return jg;
}

}  // namespace hgpr
