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

#include <cstddef>
#include <string>

#include "hgpr/linalg.hpp"

namespace hgpr {

/// Squared-exponential kernel parameters: variance * exp(-0.5 * inv_sq_lengthscale * d^2).
struct SEParams {
  double variance = 1.0;
  double inv_sq_lengthscale = 1.0;

  bool valid() const;
};

enum class KdeltaMode {
  kSeOverIndex,  // SE kernel over the group indices 1..J
  kDiagonal,     // independent effects, r_delta^2 * I
};

enum class CoordinateKind {
  kMu,
  kSigmaMinus,
  kSigmaPlus,
  kDeltaVariance,
  kFVariance,
  kGVariance,
  kDeltaInvSq,
  kFInvSq,
  kGInvSq,
};

struct CoordinateRef {
  CoordinateKind kind;
  int group = -1;  // only for the noise variances
};

/// Model hyperparameters, 2J + 7 scalars, stored on their natural scale.
///
/// Flat coordinate order: mu, sigma_minus_sq[0..J), sigma_plus_sq[0..J),
/// r_delta^2, r_f^2, r_g^2, 1/l_delta^2, 1/l_f^2, 1/l_g^2.
struct Theta {
  double mu = 0.0;
  Vector sigma_minus_sq;
  Vector sigma_plus_sq;
  SEParams delta_kernel;
  SEParams f_kernel;
  SEParams g_kernel;

  Theta() = default;
  explicit Theta(int num_groups);

  int num_groups() const { return static_cast<int>(sigma_minus_sq.size()); }
  std::size_t dimension() const { return 2 * sigma_minus_sq.size() + 7; }

  double get(std::size_t k) const;
  void set(std::size_t k, double value);

  /// Throws Error(kInvalidArgument) on a non-finite entry or a non-positive
  /// entry other than mu.
  void validate() const;

  Vector to_vector() const;
  static Theta from_vector(const Vector& v);

  bool operator==(const Theta& other) const;
};

CoordinateRef classify_coordinate(std::size_t k, int num_groups);
bool is_positive_coordinate(std::size_t k);
std::string coordinate_name(std::size_t k, int num_groups);

/// Half-Cauchy scale on every positive entry and a N(0, mu_sd^2) prior on mu.
struct PriorConfig {
  double cauchy_scale = 5.0;
  double mu_sd = 100.0;

  void validate() const;
};

}  // namespace hgpr
