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
#include <random>

#include "../support/fixtures.hpp"
#include "hgpr/error.hpp"
#include "hgpr/kernels.hpp"
#include "hgpr/linalg.hpp"

using namespace hgpr;

TEST_CASE("se_eval basics") {
  const SEParams p{1.0, 1.0};
  CHECK(se_eval(0.0, 0.0, p) == 1.0);
  CHECK(se_eval(0.0, 1.0, p) == doctest::Approx(0.606531).epsilon(1e-6));

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const SEParams q{2.5, 0.7};
  for (int i = 0; i < 200; ++i) {
    const double x = u(gen), y = u(gen);
    CHECK(se_eval(x, y, q) == se_eval(y, x, q));
    CHECK(se_eval(x, x, q) == q.variance);
  }
}

TEST_CASE("se_matrix shape, symmetry and factorizability") {
  const SEParams p{1.7, 3.0};
  Vector one(1);
  one << 0.0;
  const Matrix m1 = se_matrix(one, one, p);
  CHECK(m1.rows() == 1);
  CHECK(m1(0, 0) == 1.7);

  Vector three(3);
  three << -0.2, 0.1, 0.9;
  const Matrix m3 = se_matrix(three, three, p);
  CHECK(m3.isApprox(m3.transpose(), 0.0));
  for (int i = 0; i < 3; ++i) CHECK(m3(i, i) == 1.7);

  // 1e-8 * variance on the diagonal must always leave a factorizable matrix
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> size(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(gen);
    Vector xs(n);
    for (int i = 0; i < n; ++i) xs[i] = u(gen);
    const SEParams q{0.1 + std::abs(u(gen)) * 3.0, 0.2 + std::abs(u(gen)) * 20.0};
    Matrix k = se_matrix(xs, xs, q);
    k.diagonal().array() += 1e-8 * q.variance;
    Eigen::LLT<Matrix> llt(k);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("build_components structure") {
  SUBCASE("single all-control group") {
    const GroupedDataset data = canonicalize(
        {{0.1, -0.5, false, "x"}, {0.2, -0.2, false, "x"}, {0.3, -0.1, false, "x"}});
    Theta th = fixture::moderate_theta(1);
    const JointComponents c = build_components(data, th, KdeltaMode::kSeOverIndex);
    CHECK(c.h.rows() == 0);
    CHECK(c.h.cols() == 1);
    CHECK(c.d.isApprox(se_matrix(data.z(), data.z(), th.f_kernel), 0.0));
  }

  SUBCASE("diagonal effect kernel") {
    const GroupedDataset data = fixture::grid_dataset(3, 2);
    Theta th = fixture::moderate_theta(3);
    th.delta_kernel.variance = 2.0;
    const JointComponents c = build_components(data, th, KdeltaMode::kDiagonal);
    CHECK(c.kdelta.isApprox(2.0 * Matrix::Identity(3, 3), 0.0));
  }

  SUBCASE("block pattern of D on the four-row fixture") {
    const GroupedDataset data = canonicalize(
        {{0, -0.4, false, "1"}, {0, -0.3, false, "2"}, {0, 0.3, true, "1"}, {0, 0.6, true, "2"}});
    const JointComponents c =
        build_components(data, fixture::moderate_theta(2), KdeltaMode::kSeOverIndex);
    int brute = 0;
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t l = 0; l < 4; ++l) brute += data.group()[k] == data.group()[l];
    int nonzero = 0;
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) nonzero += c.d(k, l) != 0.0;
    CHECK(brute == 8);
    CHECK(nonzero == 8);
  }

  SUBCASE("invariants on a larger dataset") {
    const GroupedDataset data = fixture::grid_dataset(4, 5);
    const Theta th = fixture::moderate_theta(4);
    const JointComponents c = build_components(data, th, KdeltaMode::kSeOverIndex);
    const auto n = static_cast<Eigen::Index>(data.size());
    const auto nm = static_cast<Eigen::Index>(data.n_control());
    for (const Matrix* m : {&c.kg, &c.d, &c.kdelta}) {
      CHECK(m->isApprox(m->transpose(), 0.0));
      Eigen::SelfAdjointEigenSolver<Matrix> es(*m);
      CHECK(es.eigenvalues().minCoeff() >= -1e-8 * m->diagonal().maxCoeff());
    }
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index l = 0; l < n; ++l)
        if (data.group()[k] != data.group()[l]) CHECK(c.d(k, l) == 0.0);
    CHECK(Vector(c.h.rowwise().sum()) == Vector::Ones(n - nm));
    const Vector col_sums = c.h.colwise().sum().transpose();
    for (int j = 0; j < 4; ++j)
      CHECK(col_sums[j] == static_cast<double>(data.counts()[j].treated));
    for (Eigen::Index i = 0; i < n; ++i) {
      const int g = data.group()[i];
      CHECK(c.sigma[i] == (i < nm ? th.sigma_minus_sq[g] : th.sigma_plus_sq[g]));
    }
    Matrix sum = c.kg + c.d;
    sum.diagonal() += c.sigma;
    CHECK_NOTHROW(SpdFactor{sum});
  }

  SUBCASE("within-group permutation permutes the matrices") {
    auto rows = fixture::six_rows();
    const GroupedDataset a = canonicalize(rows);
    std::swap(rows[0], rows[4]);  // two control rows of group "a"
    const GroupedDataset b = canonicalize(rows);
    const Theta th = fixture::moderate_theta(2);
    const JointComponents ca = build_components(a, th, KdeltaMode::kSeOverIndex);
    const JointComponents cb = build_components(b, th, KdeltaMode::kSeOverIndex);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
    perm.setIdentity();
    perm.indices()[0] = 1;
    perm.indices()[1] = 0;
    CHECK((perm * ca.kg * perm.transpose()).isApprox(cb.kg, 0.0));
    CHECK((perm * ca.d * perm.transpose()).isApprox(cb.d, 0.0));
    CHECK((perm * ca.sigma).isApprox(cb.sigma, 0.0));
    CHECK(ca.h.isApprox(cb.h, 0.0));
  }

  SUBCASE("group count mismatch is rejected") {
    const GroupedDataset data = fixture::grid_dataset(2, 2);
    CHECK_THROWS_AS(build_components(data, fixture::moderate_theta(3), KdeltaMode::kDiagonal),
                    Error);
  }
}

TEST_CASE("SpdFactor jitter policy") {
  Matrix ok(2, 2);
  ok << 2.0, 0.5, 0.5, 1.0;
  const SpdFactor f(ok);
  CHECK(f.jitter() == 0.0);
  CHECK(f.log_det() == doctest::Approx(std::log(1.75)));

  // rank one: needs a ridge
  Matrix rank1 = Matrix::Ones(3, 3);
  const SpdFactor g(rank1);
  CHECK(g.jitter() >= 1e-8);
  CHECK(g.jitter() <= 1e-5);

  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(SpdFactor{bad}, NumericalError);

  Matrix inf = Matrix::Identity(2, 2);
  inf(0, 1) = std::nan("");
  CHECK_THROWS_AS(SpdFactor{inf}, NumericalError);
}
