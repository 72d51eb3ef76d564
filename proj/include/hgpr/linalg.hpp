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

#include <Eigen/Dense>

namespace hgpr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative jitter added to the diagonal on the first failed factorization.
inline constexpr double kBaseJitter = 1e-8;
/// Number of tenfold escalations after the first jittered attempt.
inline constexpr int kJitterEscalations = 3;

/// Cholesky factor of a symmetric positive definite matrix together with
/// the diagonal jitter that was needed to obtain it.
///
/// Factorization is attempted on the matrix as given. If that fails, a
/// jitter of kBaseJitter times the largest diagonal entry is added and then
/// escalated tenfold up to kJitterEscalations times. A matrix with a
/// non-positive largest diagonal entry uses an absolute base of kBaseJitter.
class SpdFactor {
 public:
  explicit SpdFactor(const Matrix& m);

  Eigen::Index size() const { return llt_.rows(); }
  double jitter() const { return jitter_; }
  double log_det() const;

  /// Lower-triangular factor L with L L^T = m + jitter I.
  auto lower() const { return llt_.matrixL(); }

  Vector solve(const Vector& b) const { return llt_.solve(b); }
  Matrix solve(const Matrix& b) const { return llt_.solve(b); }

  /// L^{-1} b
  Vector half_solve(const Vector& b) const;
  Matrix half_solve(const Matrix& b) const;

  /// b^T m^{-1} b
  double quad_form(const Vector& b) const;

 private:
  Eigen::LLT<Matrix> llt_;
  double jitter_ = 0.0;
};

/// Symmetrizes in place as (m + m^T) / 2.
void symmetrize(Matrix& m);

/// Log density of N(mean, cov) at x, cov given through its factor.
double mvn_log_density(const Vector& x, const Vector& mean,
                       const SpdFactor& cov);

}  // namespace hgpr
