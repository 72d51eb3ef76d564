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
#include <set>

#include "hgpr/error.hpp"
#include "hgpr/simulation.hpp"

using namespace hgpr;

namespace {

double sd_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void check_reconstruction(const SimulatedData& sim) {
  const auto& d = sim.data;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double t = d.treated(i) ? 1.0 : 0.0;
    const double resid = d.y()[k] - sim.truth.f_values[k] - t * sim.truth.delta[d.group()[i]];
    const double scale = std::abs(d.y()[k]) + std::abs(sim.truth.f_values[k]) +
                         std::abs(sim.truth.delta[d.group()[i]]);
    CHECK(std::abs(resid - sim.truth.noise[k]) <= 4e-16 * scale);
    CHECK(d.z()[k] >= -1.0);
    CHECK(d.z()[k] <= 1.0);
    if (!sim.truth.mean_functions.empty()) {
      CHECK(sim.truth.mean_functions[static_cast<std::size_t>(d.group()[i])](d.z()[k]) ==
            sim.truth.f_values[k]);
    }
  }
}

}  // namespace

TEST_CASE("DGP1") {
  CHECK(dgp1_mean(1, 0.0) == doctest::Approx(-0.59956).epsilon(1e-12));
  Rng rng = make_rng(1, Stream::kData);
  const SimulatedData sim = gen_dgp1(4, 30, rng);
  CHECK(sim.truth.delta.isZero(0.0));
  check_reconstruction(sim);

  Rng big_rng = make_rng(2, Stream::kData);
  const SimulatedData big = gen_dgp1(1, 100000, big_rng);
  std::vector<double> resid;
  for (Eigen::Index k = 0; k < big.data.y().size(); ++k)
    resid.push_back(big.data.y()[k] - dgp1_mean(1, big.data.z()[k]));
  CHECK(std::abs(sd_of(resid) - 0.1) < 0.002);
}

TEST_CASE("DGP2") {
  Rng rng = make_rng(3, Stream::kData);
  const SimulatedData sim = gen_dgp2(5, 40, rng);
  check_reconstruction(sim);
  for (const auto& f : sim.truth.mean_functions) CHECK(f(0.0) == 0.0);

  Rng rng2 = make_rng(4, Stream::kData);
  const SimulatedData many = gen_dgp2(100000, 1, rng2);
  const Vector& delta = many.truth.delta;
  const double mean = delta.mean();
  const double var = (delta.array() - mean).square().sum() / (delta.size() - 1.0);
  CHECK(std::abs(mean) < 0.02 * std::sqrt(3.0));
  CHECK(std::abs(var - 3.0) < 0.02 * 3.0);

  Rng rng3 = make_rng(5, Stream::kData);
  const SimulatedData zs = gen_dgp2(1, 100000, rng3);
  CHECK(std::abs(zs.data.z().mean() + 1.0 / 3.0) < 0.01 / 3.0);
}

TEST_CASE("DGP3") {
  CHECK(dgp3_knots().size() == 19);
  CHECK(dgp3_knots().front() == -0.9);
  CHECK(dgp3_knots().back() == 0.9);

  for (int j : {1, 2, 5, 10, 50}) {
    const Matrix s = ar1_covariance(j, 0.8);
    CHECK(s.isApprox(s.transpose(), 0.0));
    CHECK(Eigen::LLT<Matrix>(s).info() == Eigen::Success);
  }

  Rng rng = make_rng(6, Stream::kData);
  for (ErrorMode em : {ErrorMode::kA, ErrorMode::kB}) {
    check_reconstruction(gen_dgp3(3, 25, DeltaMode::kI, em, rng));
  }
  for (int rep = 0; rep < 50; ++rep) {
    const SimulatedData sim = gen_dgp3(6, 2, DeltaMode::kII, ErrorMode::kA, rng);
    std::set<double> values(sim.truth.delta.begin(), sim.truth.delta.end());
    CHECK(values.size() <= 2);
    for (double v : values) CHECK(std::abs(v) <= 3.0);
  }

  std::set<double> support;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double e = draw_error_shape(ErrorMode::kA, rng);
    support.insert(e);
    sum += e;
    sum_sq += e * e;
  }
  CHECK(support == std::set<double>{-2.0, -1.2, -0.4, 0.4, 1.2, 2.0});
  CHECK(std::abs(sum_sq / 1e5 - 0.8) < 0.02);

  double gsum = 0.0, gmin = INFINITY;
  for (int i = 0; i < 100000; ++i) {
    const double e = draw_error_shape(ErrorMode::kB, rng);
    gsum += e;
    gmin = std::min(gmin, e);
  }
  CHECK(std::abs(gsum / 1e5) < 0.02);
  CHECK(gmin > -2.0);
}

TEST_CASE("evaluate_metrics") {
  Vector truth(2), est(2);
  truth << 1.0, -1.0;
  std::vector<Interval> ivs{{0.5, 1.5}, {-2.0, 0.0}};
  const MetricsRow exact = evaluate_metrics(truth, ivs, true, 4.0, truth);
  CHECK(exact.rmse == 0.0);
  CHECK(exact.mae == 0.0);
  CHECK(exact.coverage == 1.0);
  CHECK(exact.avg_length == 1.5);
  CHECK(exact.multi_cover == 1.0);
  CHECK(exact.vol_root == doctest::Approx(2.0));

  est << 4.0, 3.0;  // errors (3, 4)
  const MetricsRow off = evaluate_metrics(est, ivs, false, 4.0, truth);
  CHECK(off.rmse == doctest::Approx(3.53553).epsilon(1e-6));
  CHECK(off.rmse == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
  CHECK(off.mae == 3.5);
  CHECK(off.abs_bias == 3.5);
  CHECK(off.multi_cover == 0.0);

  // group relabeling permutes nothing that matters
  Vector est_p(2), truth_p(2);
  est_p << est[1], est[0];
  truth_p << truth[1], truth[0];
  const MetricsRow perm = evaluate_metrics(est_p, {ivs[1], ivs[0]}, false, 4.0, truth_p);
  CHECK(perm.rmse == off.rmse);
  CHECK(perm.coverage == off.coverage);

  CHECK_THROWS_AS(evaluate_metrics(est, {ivs[0]}, false, 1.0, truth), Error);
}

TEST_CASE("run_study") {
  DgpSpec spec = DgpSpec::defaults(DgpKind::kDgp1);
  spec.groups = 2;
  spec.per_group = 12;
  StudyOptions opts;
  opts.replications = 1;
  opts.sampler.iterations = 60;
  opts.sampler.burn_in = 20;
  opts.base_seed = 100;
  const StudyReport one = run_study(spec, opts);
  REQUIRE(one.hgpr.replicates.size() == 1);
  CHECK(one.hgpr.failed == 0);
  CHECK(one.hgpr.mean.rmse == one.hgpr.replicates[0].metrics.rmse);
  CHECK(one.hgpr.mean.coverage == one.hgpr.replicates[0].metrics.coverage);

  opts.replications = 3;
  opts.cut = WindowPolicy{0.6, SkewMode::kNone, 2.0};
  const StudyReport a = run_study(spec, opts);
  opts.workers = 2;
  const StudyReport b = run_study(spec, opts);
  REQUIRE(a.cut.has_value());
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(a.hgpr.replicates[r].metrics.rmse == b.hgpr.replicates[r].metrics.rmse);
    CHECK(a.cut->replicates[r].metrics.vol_root == b.cut->replicates[r].metrics.vol_root);
  }
  CHECK(a.hgpr.replicates[0].metrics.rmse == one.hgpr.replicates[0].metrics.rmse);

  // a replicate that cannot be fit is counted, not fatal
  opts.workers = 1;
  opts.cut = WindowPolicy{1e-6, SkewMode::kNone, 2.0};
  const StudyReport failing = run_study(spec, opts);
  CHECK(failing.cut->failed == 3);
  CHECK(failing.hgpr.failed == 0);
}
