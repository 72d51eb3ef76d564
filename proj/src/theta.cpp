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

#include "hgpr/theta.hpp"

#include <cmath>

#include "hgpr/error.hpp"

namespace hgpr {

bool SEParams::valid() const {
  return std::isfinite(variance) && std::isfinite(inv_sq_lengthscale) &&
         variance > 0.0 && inv_sq_lengthscale > 0.0;
}

Theta::Theta(int num_groups)
    : sigma_minus_sq(Vector::Ones(num_groups)),
      sigma_plus_sq(Vector::Ones(num_groups)) {
  if (num_groups < 1) {
    throw Error(ErrorCategory::kInvalidArgument, "Theta needs at least one group");
  }
}

CoordinateRef classify_coordinate(std::size_t k, int num_groups) {
  const auto j = static_cast<std::size_t>(num_groups);
  if (k == 0) return {CoordinateKind::kMu};
  if (k <= j) return {CoordinateKind::kSigmaMinus, static_cast<int>(k - 1)};
  if (k <= 2 * j) return {CoordinateKind::kSigmaPlus, static_cast<int>(k - 1 - j)};
  switch (k - 2 * j - 1) {
    case 0: return {CoordinateKind::kDeltaVariance};
    case 1: return {CoordinateKind::kFVariance};
    case 2: return {CoordinateKind::kGVariance};
    case 3: return {CoordinateKind::kDeltaInvSq};
    case 4: return {CoordinateKind::kFInvSq};
    case 5: return {CoordinateKind::kGInvSq};
    default: break;
  }
  throw Error(ErrorCategory::kInvalidArgument, "theta coordinate out of range");
}

bool is_positive_coordinate(std::size_t k) { return k != 0; }

std::string coordinate_name(std::size_t k, int num_groups) {
  const CoordinateRef ref = classify_coordinate(k, num_groups);
  switch (ref.kind) {
    case CoordinateKind::kMu: return "mu";
    case CoordinateKind::kSigmaMinus:
      return "sigma_minus_sq_" + std::to_string(ref.group + 1);
    case CoordinateKind::kSigmaPlus:
      return "sigma_plus_sq_" + std::to_string(ref.group + 1);
    case CoordinateKind::kDeltaVariance: return "r_delta_sq";
    case CoordinateKind::kFVariance: return "r_f_sq";
    case CoordinateKind::kGVariance: return "r_g_sq";
    case CoordinateKind::kDeltaInvSq: return "inv_l_delta_sq";
    case CoordinateKind::kFInvSq: return "inv_l_f_sq";
    case CoordinateKind::kGInvSq: return "inv_l_g_sq";
  }
  return "?";
}

double Theta::get(std::size_t k) const {
  const CoordinateRef ref = classify_coordinate(k, num_groups());
  switch (ref.kind) {
    case CoordinateKind::kMu: return mu;
    case CoordinateKind::kSigmaMinus: return sigma_minus_sq[ref.group];
    case CoordinateKind::kSigmaPlus: return sigma_plus_sq[ref.group];
    case CoordinateKind::kDeltaVariance: return delta_kernel.variance;
    case CoordinateKind::kFVariance: return f_kernel.variance;
    case CoordinateKind::kGVariance: return g_kernel.variance;
    case CoordinateKind::kDeltaInvSq: return delta_kernel.inv_sq_lengthscale;
    case CoordinateKind::kFInvSq: return f_kernel.inv_sq_lengthscale;
    case CoordinateKind::kGInvSq: return g_kernel.inv_sq_lengthscale;
  }
  return 0.0;
}

void Theta::set(std::size_t k, double value) {
  const CoordinateRef ref = classify_coordinate(k, num_groups());
  switch (ref.kind) {
    case CoordinateKind::kMu: mu = value; break;
    case CoordinateKind::kSigmaMinus: sigma_minus_sq[ref.group] = value; break;
    case CoordinateKind::kSigmaPlus: sigma_plus_sq[ref.group] = value; break;
    case CoordinateKind::kDeltaVariance: delta_kernel.variance = value; break;
    case CoordinateKind::kFVariance: f_kernel.variance = value; break;
    case CoordinateKind::kGVariance: g_kernel.variance = value; break;
    case CoordinateKind::kDeltaInvSq: delta_kernel.inv_sq_lengthscale = value; break;
    case CoordinateKind::kFInvSq: f_kernel.inv_sq_lengthscale = value; break;
    case CoordinateKind::kGInvSq: g_kernel.inv_sq_lengthscale = value; break;
  }
}

void Theta::validate() const {
  if (sigma_minus_sq.size() == 0 || sigma_minus_sq.size() != sigma_plus_sq.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "theta noise vectors must be nonempty and of equal length");
  }
  if (!std::isfinite(mu)) {
    throw Error(ErrorCategory::kInvalidArgument, "theta: mu is not finite");
  }
  for (std::size_t k = 1; k < dimension(); ++k) {
    const double v = get(k);
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error(ErrorCategory::kInvalidArgument,
                  "theta: " + coordinate_name(k, num_groups()) +
                      " must be positive and finite");
    }
  }
}

Vector Theta::to_vector() const {
  Vector v(static_cast<Eigen::Index>(dimension()));
  for (std::size_t k = 0; k < dimension(); ++k) {
    v[static_cast<Eigen::Index>(k)] = get(k);
  }
  return v;
}

Theta Theta::from_vector(const Vector& v) {
  const auto n = v.size();
  if (n < 9 || (n - 7) % 2 != 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "theta vector length must be 2J + 7");
  }
  Theta t(static_cast<int>((n - 7) / 2));
  for (Eigen::Index k = 0; k < n; ++k) t.set(static_cast<std::size_t>(k), v[k]);
  return t;
}

bool Theta::operator==(const Theta& other) const {
  return dimension() == other.dimension() && to_vector() == other.to_vector();
}

void PriorConfig::validate() const {
  if (!(std::isfinite(cauchy_scale) && cauchy_scale > 0.0 &&
        std::isfinite(mu_sd) && mu_sd > 0.0)) {
    throw Error(ErrorCategory::kConfig,
                "prior scales must be positive and finite");
  }
}

}  // namespace hgpr
