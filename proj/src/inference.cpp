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

#include "hgpr/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hgpr/error.hpp"

namespace hgpr {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCategory::kInvalidArgument, "alpha must lie in (0, 1)");
  }
}

}  // namespace

double quantile_linear(std::vector<double> values, double p) {
  if (values.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<Interval> marginal_intervals(const Matrix& draws, double alpha) {
  check_alpha(alpha);
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(draws.cols()));
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    std::vector<double> col(draws.col(j).data(),
                            draws.col(j).data() + draws.rows());
    out.push_back({quantile_linear(col, alpha / 2.0),
                   quantile_linear(col, 1.0 - alpha / 2.0)});
  }
  return out;
}

Matrix batch_means_cov(const Matrix& draws) {
  const Eigen::Index t = draws.rows();
  if (t < 4) {
    throw Error(ErrorCategory::kInvalidArgument,
                "batch means needs at least 4 draws");
  }
  const auto b = static_cast<Eigen::Index>(std::floor(std::sqrt(static_cast<double>(t))));
  const Eigen::Index a = t / b;
  Matrix means(a, draws.cols());
  for (Eigen::Index k = 0; k < a; ++k) {
    means.row(k) = draws.middleRows(k * b, b).colwise().mean();
  }
  const Eigen::RowVectorXd grand = means.colwise().mean();
  const Matrix centered = means.rowwise() - grand;
  Matrix cov = (static_cast<double>(b) / static_cast<double>(a - 1)) *
               (centered.transpose() * centered);
  symmetrize(cov);
  return cov;
}

Vector mahalanobis_statistics(const Matrix& draws, const Vector& mean,
                              const Matrix& sigma) {
  if (draws.cols() != mean.size() || sigma.rows() != mean.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "mahalanobis_statistics: dimension mismatch");
  }
  const SpdFactor factor(sigma);
  const Matrix centered = (draws.rowwise() - mean.transpose()).transpose();
  const Matrix w = factor.half_solve(centered);
  return w.colwise().squaredNorm().transpose();
}

double radius_nudge(double order_statistic) {
  return 1e-12 * std::max(std::abs(order_statistic), 1.0);
}

double critical_radius(const Matrix& draws, const Vector& mean,
                       const Matrix& sigma, double alpha) {
  check_alpha(alpha);
  if (draws.rows() == 0) {
    throw Error(ErrorCategory::kInvalidArgument, "critical_radius: no draws");
  }
  Vector stats = mahalanobis_statistics(draws, mean, sigma);
  std::sort(stats.begin(), stats.end());
  const double t = static_cast<double>(stats.size());
  auto needed = static_cast<Eigen::Index>(std::ceil((1.0 - alpha) * t - 1e-9));
  needed = std::clamp<Eigen::Index>(needed, 1, stats.size());
  const double s = stats[needed - 1];
  return s + radius_nudge(s);
}

double region_volume(const Matrix& sigma, double r_alpha) {
  if (r_alpha < 0.0 || sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw Error(ErrorCategory::kInvalidArgument, "region_volume: bad input");
  }
  if (r_alpha == 0.0) return 0.0;
  const double p = static_cast<double>(sigma.rows());
  const SpdFactor factor(sigma);
  const double log_vol = std::log(2.0) + 0.5 * p * std::log(std::numbers::pi) -
                         std::log(p) - std::lgamma(0.5 * p) +
                         0.5 * p * std::log(r_alpha) + 0.5 * factor.log_det();
  return std::exp(log_vol);
}

PosteriorSummary summarize(const Matrix& delta_draws, double alpha) {
  check_alpha(alpha);
  if (delta_draws.rows() == 0) {
    throw Error(ErrorCategory::kInvalidArgument, "summarize: empty chain");
  }
  PosteriorSummary s;
  s.alpha = alpha;
  s.delta_mean = delta_draws.colwise().mean().transpose();
  s.marginal_intervals = marginal_intervals(delta_draws, alpha);
  s.sigma_hat = batch_means_cov(delta_draws);
  s.r_alpha = critical_radius(delta_draws, s.delta_mean, s.sigma_hat, alpha);
  s.volume = region_volume(s.sigma_hat, s.r_alpha);
  return s;
}

PosteriorSummary summarize(const Chain& chain, double alpha) {
  return summarize(chain.delta_draws(), alpha);
}

double region_statistic(const PosteriorSummary& summary, const Vector& point) {
  const SpdFactor factor(summary.sigma_hat);
  return factor.quad_form(point - summary.delta_mean);
}

bool region_contains(const PosteriorSummary& summary, const Vector& point) {
  return region_statistic(summary, point) < summary.r_alpha;
}

SharpNullTest test_sharp_null(const PosteriorSummary& summary) {
  SharpNullTest out;
  out.statistic =
      region_statistic(summary, Vector::Zero(summary.delta_mean.size()));
  out.reject = out.statistic >= summary.r_alpha;
  return out;
}

HomogeneousNullTest test_homogeneous_null(const PosteriorSummary& summary) {
  const SpdFactor factor(summary.sigma_hat);
  const Vector ones = Vector::Ones(summary.delta_mean.size());
  const Vector inv_ones = factor.solve(ones);
  HomogeneousNullTest out;
  out.c_star = inv_ones.dot(summary.delta_mean) / inv_ones.dot(ones);
  out.statistic = factor.quad_form(out.c_star * ones - summary.delta_mean);
  out.reject = out.statistic >= summary.r_alpha;
  return out;
}

}  // namespace hgpr
