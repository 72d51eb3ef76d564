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
#include <memory>
#include <optional>

#include "hgpr/dataset.hpp"
#include "hgpr/linalg.hpp"
#include "hgpr/model.hpp"
#include "hgpr/theta.hpp"

namespace hgpr {

/// Marginal likelihood of Y with Lambda22 kept as its four addends
///
///   Lambda22 = r_g^2 E_g + r_f^2 E_f + diag(Sigma) + [0 0; 0 r_delta^2 H E_delta H^T]
///
/// where the E matrices are the unit-variance exponential parts. A change to
/// one theta coordinate rebuilds at most one E matrix (or only Sigma, or
/// nothing for a variance or mu), then refactorizes.
///
/// Single-threaded; one cache per chain.
class LikelihoodCache {
 public:
  /// A proposed single-coordinate change, evaluated but not yet committed.
  class Candidate {
   public:
    const Theta& theta() const { return theta_; }
    double log_marginal() const { return log_marginal_; }
    std::size_t coordinate() const { return coord_; }

   private:
    friend class LikelihoodCache;
    Theta theta_;
    std::size_t coord_ = 0;
    std::optional<Matrix> unit_;
    std::optional<Vector> sigma_;
    std::shared_ptr<const SpdFactor> factor_;
    double log_marginal_ = 0.0;
  };

  LikelihoodCache(const GroupedDataset& data, const Theta& theta,
                  KdeltaMode mode);

  const Theta& theta() const { return theta_; }
  double log_marginal() const { return log_marginal_; }
  KdeltaMode kdelta_mode() const { return mode_; }
  int num_groups() const { return theta_.num_groups(); }

  /// Evaluates theta with coordinate `coord` replaced by `value`.
  /// Throws NumericalError when Lambda22 cannot be factorized, and
  /// Error(kInvalidArgument) when the value leaves the parameter space.
  Candidate evaluate(std::size_t coord, double value) const;

  void commit(Candidate&& candidate);

  /// Conditional law of delta at the current theta.
  DeltaPosterior delta_posterior() const;

  /// Joint Gaussian rebuilt from the cached addends.
  JointGaussian joint() const;

 private:
  Matrix assemble_lambda22(const Theta& theta, const Matrix& eg,
                           const Matrix& ef, const Matrix& ed,
                           const Vector& sigma) const;
  Vector noise_vector(const Theta& theta) const;
  Matrix unit_delta(double inv_sq) const;
  double evaluate_log_marginal(const SpdFactor& factor, double mu) const;

  Vector y_;
  std::vector<int> group_;
  Eigen::Index n_minus_ = 0;
  KdeltaMode mode_;

  Matrix sqdist_;        // (z_k - z_l)^2
  Matrix sqdist_group_;  // same, +inf across groups
  Matrix eg_;
  Matrix ef_;
  Matrix ed_;
  Vector sigma_;

  Theta theta_;
  std::shared_ptr<const SpdFactor> factor_;
  double log_marginal_ = 0.0;
};

}  // namespace hgpr
