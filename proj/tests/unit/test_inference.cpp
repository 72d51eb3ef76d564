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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hgpr/error.hpp"
#include "hgpr/inference.hpp"

using namespace hgpr;

namespace {

Matrix iid_normal(Eigen::Index t, Eigen::Index p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(t, p);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = nd(gen);
  return m;
}

PosteriorSummary summary_of(const Vector& mean, const Matrix& sigma, double r) {
  PosteriorSummary s;
  s.delta_mean = mean;
  s.sigma_hat = sigma;
  s.r_alpha = r;
  return s;
}

}  // namespace

TEST_CASE("summaries and quantiles") {
  SUBCASE("identical draws") {
    Matrix draws(50, 2);
    draws.col(0).setConstant(1.5);
    draws.col(1).setConstant(-0.5);
    const PosteriorSummary s = summarize(draws, 0.05);
    CHECK(s.delta_mean[0] == 1.5);
    CHECK(s.marginal_intervals[1].length() == 0.0);
    CHECK(s.sigma_hat.isZero(0.0));
    CHECK(s.r_alpha > 0.0);
    CHECK(s.r_alpha <= 1e-11);
  }
  SUBCASE("two-draw linear interpolation") {
    Matrix draws(2, 1);
    draws << 0.0, 1.0;
    const auto iv = marginal_intervals(draws, 0.5);
    CHECK(iv[0].lower == doctest::Approx(0.25));
    CHECK(iv[0].upper == doctest::Approx(0.75));
  }
  SUBCASE("normal quantiles") {
    const PosteriorSummary s = summarize(iid_normal(100000, 1, 1), 0.05);
    CHECK(std::abs(s.marginal_intervals[0].lower + 1.959964) < 0.03);
    CHECK(std::abs(s.marginal_intervals[0].upper - 1.959964) < 0.03);
    CHECK(s.marginal_intervals[0].contains(s.delta_mean[0]));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(summarize(Matrix(0, 2), 0.05), Error);
    CHECK_THROWS_AS(summarize(iid_normal(10, 1, 1), 0.0), Error);
    CHECK_THROWS_AS(critical_radius(iid_normal(10, 1, 1), Vector::Zero(1),
                                    Matrix::Identity(1, 1), 0.0),
                    Error);
  }
}

TEST_CASE("batch_means_cov") {
  Matrix constant = Matrix::Constant(30, 2, 3.0);
  CHECK(batch_means_cov(constant).isZero(0.0));

  Matrix four(4, 1);
  four << 0, 0, 2, 2;
  CHECK(batch_means_cov(four)(0, 0) == doctest::Approx(4.0));

  // the same arithmetic spelled out for an uneven length
  Matrix seven(7, 1);
  seven << 1, 2, 3, 4, 5, 6, 100;  // b = 2, a = 3, last draw dropped
  const double m1 = 1.5, m2 = 3.5, m3 = 5.5, mb = 3.5;
  const double expect = 2.0 / 2.0 * ((m1 - mb) * (m1 - mb) + (m2 - mb) * (m2 - mb) + (m3 - mb) * (m3 - mb));
  CHECK(batch_means_cov(seven)(0, 0) == doctest::Approx(expect));

  CHECK_THROWS_AS(batch_means_cov(Matrix::Zero(3, 1)), Error);

  // With a = 316 batches the diagonal has sd sqrt(2 / 315) ~ 0.08 and the
  // off-diagonal 1 / sqrt(315) ~ 0.056; allow four of each.
  const Matrix est = batch_means_cov(iid_normal(100000, 3, 2));
  const double a = std::floor(100000.0 / std::floor(std::sqrt(100000.0)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double sd = i == j ? std::sqrt(2.0 / (a - 1)) : 1.0 / std::sqrt(a - 1);
      CHECK(std::abs(est(i, j) - (i == j)) < 4.0 * sd);
    }
}

TEST_CASE("critical radius") {
  const Matrix draws = iid_normal(100000, 2, 3);
  const Vector mean = draws.colwise().mean().transpose();
  const double r = critical_radius(draws, mean, Matrix::Identity(2, 2), 0.05);
  CHECK(std::abs(r - 5.991465) < 0.05 * 5.991465);

  // minimality: exactly ceil(0.95 T) strictly inside, one fewer below
  const Matrix small = iid_normal(401, 3, 4);
  const Vector m = small.colwise().mean().transpose();
  const Matrix sig = batch_means_cov(small);
  const double radius = critical_radius(small, m, sig, 0.05);
  const Vector stats = mahalanobis_statistics(small, m, sig);
  const auto inside = (stats.array() < radius).count();
  CHECK(inside == static_cast<Eigen::Index>(std::ceil(0.95 * 401)));
  const auto order = radius - radius_nudge(radius);
  CHECK((stats.array() < order - 9 * radius_nudge(order)).count() == inside - 1);
}

TEST_CASE("region_volume") {
  CHECK(std::abs(region_volume(Matrix::Identity(2, 2), 1.0) - std::numbers::pi) < 1e-12);
  CHECK(region_volume(Matrix::Identity(1, 1), 4.0) == doctest::Approx(4.0).epsilon(1e-14));

  Matrix sigma(3, 3);
  sigma << 2.0, 0.3, 0.1, 0.3, 1.0, 0.2, 0.1, 0.2, 0.5;
  const double base = region_volume(sigma, 2.0);
  CHECK(region_volume(9.0 * sigma, 2.0) == doctest::Approx(27.0 * base).epsilon(1e-12));
  CHECK(region_volume(sigma, 3.0) > base);
  Matrix wider = sigma;
  wider(0, 0) += 0.5;
  CHECK(region_volume(wider, 2.0) > base);
  // unit ball in three dimensions
  CHECK(region_volume(Matrix::Identity(3, 3), 1.0) ==
        doctest::Approx(4.0 / 3.0 * std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("sharp null") {
  const Matrix id = Matrix::Identity(2, 2);
  const SharpNullTest zero = test_sharp_null(summary_of(Vector::Zero(2), id, 5.99));
  CHECK(zero.statistic == 0.0);
  CHECK_FALSE(zero.reject);

  const SharpNullTest far =
      test_sharp_null(summary_of(Vector::Constant(2, 3.0), 1e-4 * id, 5.99));
  CHECK(far.reject);

  Matrix sigma(2, 2);
  sigma << 2.0, 0.5, 0.5, 1.0;
  Vector mu(2);
  mu << 0.7, -1.1;
  // hand inverse of [[2, .5], [.5, 1]]: det 1.75
  const double hand = (1.0 * 0.7 * 0.7 - 2 * 0.5 * 0.7 * -1.1 + 2.0 * 1.1 * 1.1) / 1.75;
  CHECK(std::abs(test_sharp_null(summary_of(mu, sigma, 1.0)).statistic - hand) < 1e-12);
}

TEST_CASE("homogeneous null") {
  const HomogeneousNullTest flat =
      test_homogeneous_null(summary_of(Vector::Constant(4, 1.3), Matrix::Identity(4, 4), 9.0));
  CHECK(flat.c_star == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(flat.statistic == doctest::Approx(0.0).epsilon(1e-20));
  CHECK_FALSE(flat.reject);

  Vector mu(3);
  mu << 0.2, 1.0, -0.6;
  CHECK(test_homogeneous_null(summary_of(mu, Matrix::Identity(3, 3), 9.0)).c_star ==
        doctest::Approx(0.2).epsilon(1e-14));

  // grid search over C on a random five-dimensional fixture
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix a(5, 5);
  for (int i = 0; i < 25; ++i) a(i / 5, i % 5) = nd(gen);
  const Matrix sigma = a * a.transpose() + 0.5 * Matrix::Identity(5, 5);
  Vector m(5);
  for (int i = 0; i < 5; ++i) m[i] = nd(gen);
  const PosteriorSummary s = summary_of(m, sigma, 11.07);
  const HomogeneousNullTest h = test_homogeneous_null(s);
  const Matrix inv = sigma.inverse();
  double best_c = 0.0, best = INFINITY;
  for (double c = -5.0; c <= 5.0; c += 1e-4) {
    const Vector d = Vector::Constant(5, c) - m;
    const double v = d.dot(inv * d);
    if (v < best) best = v, best_c = c;
  }
  CHECK(std::abs(h.c_star - best_c) < 1e-3);
  CHECK(h.statistic <= test_sharp_null(s).statistic + 1e-12);
}

TEST_CASE("group permutation leaves region decisions unchanged") {
  const Matrix draws = iid_normal(900, 3, 12) * 0.5 + Matrix::Constant(900, 3, 0.4);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(3);
  perm.indices() << 2, 0, 1;
  const Matrix permuted = draws * perm.transpose();
  const PosteriorSummary a = summarize(draws, 0.05);
  const PosteriorSummary b = summarize(permuted, 0.05);
  CHECK((perm * a.delta_mean).isApprox(b.delta_mean, 1e-12));
  CHECK((perm * a.sigma_hat * perm.transpose()).isApprox(b.sigma_hat, 1e-12));
  CHECK(a.r_alpha == doctest::Approx(b.r_alpha).epsilon(1e-10));
  CHECK(a.volume == doctest::Approx(b.volume).epsilon(1e-10));
  CHECK(test_sharp_null(a).reject == test_sharp_null(b).reject);
  CHECK(test_homogeneous_null(a).reject == test_homogeneous_null(b).reject);
}
