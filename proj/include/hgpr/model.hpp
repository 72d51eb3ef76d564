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

#pragma once

#include "hgpr/kernels.hpp"
#include "hgpr/linalg.hpp"
#include "hgpr/theta.hpp"

namespace hgpr {

/// Mean and block covariance of (delta, Y) once f and g are marginalized:
///
///   mu_delta = 1 mu,  mu_Y = [0; 1 mu]
///   Lambda11 = K_delta
///   Lambda12 = [0 | K_delta H^T]
///   Lambda22 = K_g + D + Sigma + blockdiag(0, H K_delta H^T)
struct JointGaussian {
  Vector mu_delta;
  Vector mu_y;
  Matrix lambda11;
  Matrix lambda12;
  Matrix lambda22;

  Vector full_mean() const;
  Matrix full_covariance() const;
};

JointGaussian assemble_joint(const JointComponents& components,
                             const Theta& theta);

/// log N(y; mu_Y, Lambda22).
double log_marginal(const Vector& y, const JointGaussian& jg);

/// Sum of half-Cauchy log densities over the positive entries plus the
/// normal log density of mu.
double log_prior(const Theta& theta, const PriorConfig& prior);

/// log of the half-Cauchy(scale) density at x > 0.
double half_cauchy_log_density(double x, double scale);

struct DeltaPosterior {
  Vector mean;
  Matrix cov;
};

/// Conditional law of delta given Y at fixed hyperparameters.
DeltaPosterior delta_conditional(const JointGaussian& jg, const Vector& y);

}  // namespace hgpr
