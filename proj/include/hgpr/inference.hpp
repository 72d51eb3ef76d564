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

#include <vector>

#include "hgpr/linalg.hpp"
#include "hgpr/sampler.hpp"

namespace hgpr {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double length() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Posterior summary of the treatment-effect draws at credible level 1 - alpha.
struct PosteriorSummary {
  Vector delta_mean;
  std::vector<Interval> marginal_intervals;
  Matrix sigma_hat;  // batch-means covariance
  double r_alpha = 0.0;
  double volume = 0.0;
  double alpha = 0.05;
};

/// Sample quantile at probability p, linear interpolation between order
/// statistics (position (n - 1) p).
double quantile_linear(std::vector<double> values, double p);

/// Equal-tailed (alpha/2, 1 - alpha/2) interval of each column of `draws`.
std::vector<Interval> marginal_intervals(const Matrix& draws, double alpha);

/// Batch size floor(sqrt(T)), floor(T / b) consecutive batches, scaled as
/// b / (a - 1) times the scatter of the batch means. Needs T >= 4.
Matrix batch_means_cov(const Matrix& draws);

/// (x_t - mean)^T sigma^{-1} (x_t - mean) for every row of `draws`.
Vector mahalanobis_statistics(const Matrix& draws, const Vector& mean,
                              const Matrix& sigma);

/// Amount added on top of the order statistic so that the strict inequality
/// holds at the required count.
double radius_nudge(double order_statistic);

/// Smallest R such that at least ceil((1 - alpha) T) draws have
/// Mahalanobis statistic strictly below R.
double critical_radius(const Matrix& draws, const Vector& mean,
                       const Matrix& sigma, double alpha);

/// Volume of {x : (x - m)^T sigma^{-1} (x - m) < r_alpha} in dimension
/// p = sigma.rows().
double region_volume(const Matrix& sigma, double r_alpha);

PosteriorSummary summarize(const Matrix& delta_draws, double alpha);
PosteriorSummary summarize(const Chain& chain, double alpha);

/// Mahalanobis statistic of `point` under the summary's ellipsoid.
double region_statistic(const PosteriorSummary& summary, const Vector& point);
bool region_contains(const PosteriorSummary& summary, const Vector& point);

struct SharpNullTest {
  double statistic = 0.0;
  bool reject = false;
};

struct HomogeneousNullTest {
  double c_star = 0.0;
  double statistic = 0.0;
  bool reject = false;
};

/// H0: delta = 0. Rejects when 0 lies outside the credible region.
SharpNullTest test_sharp_null(const PosteriorSummary& summary);

/// H0: delta = C 1 for some C. Rejects when the line misses the region.
HomogeneousNullTest test_homogeneous_null(const PosteriorSummary& summary);

}  // namespace hgpr
