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

#include "hgpr/dataset.hpp"
#include "hgpr/linalg.hpp"
#include "hgpr/theta.hpp"

namespace hgpr {

double se_eval(double x, double y, const SEParams& p);

Matrix se_matrix(const Vector& xs, const Vector& ys, const SEParams& p);

/// J x J prior covariance of the treatment effects.
Matrix kdelta_matrix(int num_groups, const SEParams& p, KdeltaMode mode);

/// The structural pieces of the joint covariance of (delta, Y).
struct JointComponents {
  Matrix kg;      // N x N, common-mean kernel on all running values
  Matrix d;       // N x N, within-group kernel, zero across groups
  Matrix kdelta;  // J x J
  Matrix h;       // N_+ x J, group indicator of treated rows
  Vector sigma;   // N, noise variance per row
};

JointComponents build_components(const GroupedDataset& data,
                                 const Theta& theta, KdeltaMode mode);

}  // namespace hgpr
