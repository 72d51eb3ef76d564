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

#include "hgpr/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hgpr/error.hpp"

namespace hgpr {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument: return "invalid_argument";
    case ErrorCategory::kDataset: return "dataset";
    case ErrorCategory::kNumerical: return "numerical";
    case ErrorCategory::kConfig: return "config";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

namespace {

bool factor_ok(const Eigen::LLT<Matrix>& llt) {
  if (llt.info() != Eigen::Success) return false;
  const auto& lm = llt.matrixLLT();
  for (Eigen::Index i = 0; i < lm.rows(); ++i) {
    const double d = lm(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
  }
  return true;
}

}  // namespace

SpdFactor::SpdFactor(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "SpdFactor: matrix is not square");
  }
  if (m.rows() == 0) {
    llt_.compute(m);
    return;
  }
  if (!m.allFinite()) {
    throw NumericalError("SpdFactor: matrix has non-finite entries");
  }
  llt_.compute(m);
  if (factor_ok(llt_)) return;

  const double max_diag = m.diagonal().maxCoeff();
  const double scale = max_diag > 0.0 ? max_diag : 1.0;
  double jitter = kBaseJitter * scale;
  Matrix work = m;
  for (int attempt = 0; attempt <= kJitterEscalations; ++attempt) {
    work.diagonal() = m.diagonal().array() + jitter;
    llt_.compute(work);
    if (factor_ok(llt_)) {
      jitter_ = jitter;
      return;
    }
    jitter *= 10.0;
  }
  std::ostringstream msg;
  msg << "Cholesky factorization failed for " << m.rows() << "x" << m.cols()
      << " matrix after jitter escalation to " << jitter / 10.0;
  throw NumericalError(msg.str());
}

double SpdFactor::log_det() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Vector SpdFactor::half_solve(const Vector& b) const {
  return llt_.matrixL().solve(b);
}

Matrix SpdFactor::half_solve(const Matrix& b) const {
  return llt_.matrixL().solve(b);
}

double SpdFactor::quad_form(const Vector& b) const {
  return half_solve(b).squaredNorm();
}

void symmetrize(Matrix& m) {
  m = 0.5 * (m + m.transpose()).eval();
}

double mvn_log_density(const Vector& x, const Vector& mean,
                       const SpdFactor& cov) {
  const double n = static_cast<double>(x.size());
  return -0.5 * (cov.quad_form(x - mean) + cov.log_det() +
                 n * std::log(2.0 * std::numbers::pi));
}

}  // namespace hgpr
