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

#include "hgpr/simulation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "hgpr/error.hpp"
#include "hgpr/kernels.hpp"

namespace hgpr {

namespace {

struct Row {
  double z;
  double f;
  double noise;
  int group;
};

SimulatedData finalize(const std::vector<Row>& rows, int groups, Vector delta,
                       Vector noise_sd,
                       std::vector<std::function<double(double)>> mean_functions) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool ta = rows[a].z >= 0.0, tb = rows[b].z >= 0.0;
    if (ta != tb) return !ta;
    return rows[a].group < rows[b].group;
  });
  const auto n = static_cast<Eigen::Index>(rows.size());
  Vector y(n), z(n), f(n), noise(n);
  std::vector<int> group(rows.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Row& r = rows[order[static_cast<std::size_t>(k)]];
    const double t = r.z >= 0.0 ? 1.0 : 0.0;
    z[k] = r.z;
    f[k] = r.f;
    noise[k] = r.noise;
    y[k] = r.f + t * delta[r.group] + r.noise;
    group[static_cast<std::size_t>(k)] = r.group;
  }
  std::vector<std::string> labels;
  for (int j = 1; j <= groups; ++j) labels.push_back(std::to_string(j));
  TruthRecord truth{std::move(delta), std::move(f), std::move(noise),
                    std::move(noise_sd), std::move(mean_functions)};
  return {GroupedDataset(std::move(y), std::move(z), std::move(group),
                         std::move(labels)),
          std::move(truth)};
}

void check_sizes(int groups, int per_group) {
  if (groups < 1 || per_group < 1) {
    throw Error(ErrorCategory::kConfig, "groups and per-group size must be >= 1");
  }
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double beta_draw(Rng& rng, double a, double b) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x / (x + y);
}

Vector standard_normals(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

DgpSpec DgpSpec::defaults(DgpKind kind) {
  DgpSpec spec;
  spec.kind = kind;
  spec.groups = kind == DgpKind::kDgp2 ? 25 : 10;
  spec.per_group = 100;
  return spec;
}

void DgpSpec::validate() const {
  check_sizes(groups, per_group);
  if (kind == DgpKind::kWellSpecified) {
    if (!theta) {
      throw Error(ErrorCategory::kConfig,
                  "well-specified generator needs a theta truth");
    }
    if (theta->num_groups() != groups) {
      throw Error(ErrorCategory::kConfig, "theta truth has the wrong J");
    }
    theta->validate();
  }
}

double dgp1_mean(int j, double z) {
  const double jd = static_cast<double>(j);
  return -0.555 - 0.0553 * jd + 0.581 * z + 0.0060 * jd * z - 0.058 * z * z +
         0.01074 * jd * jd;
}

SimulatedData gen_dgp1(int groups, int per_group, Rng& rng) {
  check_sizes(groups, per_group);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(groups * per_group));
  std::vector<std::function<double(double)>> means;
  for (int j = 0; j < groups; ++j) {
    means.emplace_back([j](double z) { return dgp1_mean(j + 1, z); });
    for (int i = 0; i < per_group; ++i) {
      const double z = uniform(rng, -1.0, 1.0);
      rows.push_back({z, dgp1_mean(j + 1, z), noise(rng), j});
    }
  }
  return finalize(rows, groups, Vector::Zero(groups),
                  Vector::Constant(groups, 0.1), std::move(means));
}

SimulatedData gen_dgp2(int groups, int per_group, Rng& rng) {
  check_sizes(groups, per_group);
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(groups * per_group));
  std::vector<std::function<double(double)>> means;
  Vector delta(groups), sd(groups);
  std::gamma_distribution<double> gamma(3.0, 1.0);
  for (int j = 0; j < groups; ++j) {
    const double a1 = uniform(rng, 0.4, 1.4);
    const double b1 = uniform(rng, 0.4, 1.4);
    const double a2 = uniform(rng, 3.0, 7.0);
    const double a3 = uniform(rng, 9.0, 11.0);
    const double b2 = uniform(rng, 5.0, 9.0);
    const double b3 = uniform(rng, 3.0, 5.0);
    const double sigma_sq = uniform(rng, 0.5, 1.2);
    delta[j] = gamma(rng) - 3.0;
    sd[j] = std::sqrt(sigma_sq);
    auto f = [=](double z) {
      return z < 0.0 ? z * (a1 + z * (a2 + z * a3)) : z * (b1 + z * (b2 + z * b3));
    };
    means.emplace_back(f);
    std::normal_distribution<double> noise(0.0, sd[j]);
    for (int i = 0; i < per_group; ++i) {
      const double z = 2.0 * beta_draw(rng, 2.0, 4.0) - 1.0;
      rows.push_back({z, f(z), noise(rng), j});
    }
  }
  return finalize(rows, groups, std::move(delta), std::move(sd), std::move(means));
}

std::vector<double> dgp3_knots() {
  std::vector<double> knots;
  for (int k = -9; k <= 9; ++k) knots.push_back(static_cast<double>(k) / 10.0);
  return knots;
}

Matrix ar1_covariance(int n, double rho) {
  Matrix s(n, n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) s(a, b) = std::pow(rho, std::abs(a - b));
  }
  return s;
}

double draw_error_shape(ErrorMode mode, Rng& rng) {
  if (mode == ErrorMode::kA) {
    const int k = std::binomial_distribution<int>(5, 0.5)(rng);
    return (static_cast<double>(k) - 5.0 * 0.5) / (5.0 * 0.25);
  }
  // Gamma(shape 4, rate 2) has mean 2.
  return std::gamma_distribution<double>(4.0, 0.5)(rng) - 2.0;
}

SimulatedData gen_dgp3(int groups, int per_group, DeltaMode delta_mode,
                       ErrorMode error_mode, Rng& rng) {
  check_sizes(groups, per_group);
  constexpr double kSigmaA = 10.0;
  constexpr double kRho = 0.8;
  const std::vector<double> knots = dgp3_knots();

  Vector delta(groups);
  if (delta_mode == DeltaMode::kI) {
    const SpdFactor s(ar1_covariance(groups, kRho));
    delta = s.lower() * standard_normals(groups, rng);
  } else {
    const double tau1 = uniform(rng, -3.0, 3.0);
    const double tau2 = uniform(rng, -3.0, 3.0);
    std::bernoulli_distribution coin(0.5);
    for (int j = 0; j < groups; ++j) delta[j] = coin(rng) ? tau1 : tau2;
  }

  std::normal_distribution<double> coef(0.0, kSigmaA);
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(groups * per_group));
  std::vector<std::function<double(double)>> means;
  Vector sd(groups);
  for (int j = 0; j < groups; ++j) {
    std::array<double, 4> poly{};
    for (double& a : poly) a = coef(rng);
    std::vector<double> c(knots.size());
    for (double& ck : c) ck = coef(rng);
    sd[j] = std::sqrt(uniform(rng, 0.25, 0.5));
    auto f = [poly, c, knots](double z) {
      double v = poly[0] + z * (poly[1] + z * (poly[2] + z * poly[3]));
      for (std::size_t k = 0; k < knots.size(); ++k) {
        const double u = std::max(z - knots[k], 0.0);
        v += c[k] * u * u * u;
      }
      return v;
    };
    means.emplace_back(f);
    for (int i = 0; i < per_group; ++i) {
      const double z = uniform(rng, -1.0, 1.0);
      const double eps = sd[j] * draw_error_shape(error_mode, rng);
      rows.push_back({z, f(z), eps, j});
    }
  }
  return finalize(rows, groups, std::move(delta), std::move(sd), std::move(means));
}

SimulatedData gen_well_specified(int groups, int per_group, const Theta& theta,
                                 KdeltaMode mode, Rng& rng) {
  check_sizes(groups, per_group);
  if (theta.num_groups() != groups) {
    throw Error(ErrorCategory::kConfig, "theta truth has the wrong J");
  }
  theta.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(groups) * per_group;
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = uniform(rng, -1.0, 1.0);

  const SpdFactor kg(se_matrix(z, z, theta.g_kernel));
  const Vector g = kg.lower() * standard_normals(n, rng);

  Vector f(n);
  for (int j = 0; j < groups; ++j) {
    const auto block = Eigen::seqN(static_cast<Eigen::Index>(j) * per_group, per_group);
    const Vector zj = z(block);
    const SpdFactor kf(se_matrix(zj, zj, theta.f_kernel));
    f(block) = g(block) + kf.lower() * standard_normals(per_group, rng);
  }

  const SpdFactor kd(kdelta_matrix(groups, theta.delta_kernel, mode));
  const Vector delta =
      Vector::Constant(groups, theta.mu) + kd.lower() * standard_normals(groups, rng);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int j = static_cast<int>(i / per_group);
    const double var = z[i] >= 0.0 ? theta.sigma_plus_sq[j] : theta.sigma_minus_sq[j];
    rows.push_back({z[i], f[i], std::sqrt(var) * normal(rng), j});
  }
  return finalize(rows, groups, delta, Vector::Constant(groups, std::nan("")), {});
}

SimulatedData generate(const DgpSpec& spec, Rng& rng) {
  spec.validate();
  switch (spec.kind) {
    case DgpKind::kDgp1: return gen_dgp1(spec.groups, spec.per_group, rng);
    case DgpKind::kDgp2: return gen_dgp2(spec.groups, spec.per_group, rng);
    case DgpKind::kDgp3:
      return gen_dgp3(spec.groups, spec.per_group, spec.delta_mode,
                      spec.error_mode, rng);
    case DgpKind::kWellSpecified:
      return gen_well_specified(spec.groups, spec.per_group, *spec.theta,
                                spec.kdelta_mode, rng);
  }
  throw Error(ErrorCategory::kConfig, "unknown DGP kind");
}

MetricsRow evaluate_metrics(const Vector& estimates,
                            const std::vector<Interval>& intervals,
                            bool truth_in_region, double volume,
                            const Vector& truth) {
  const auto j = truth.size();
  if (estimates.size() != j || static_cast<Eigen::Index>(intervals.size()) != j ||
      j == 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "evaluate_metrics: dimension mismatch");
  }
  const double jd = static_cast<double>(j);
  const Vector err = estimates - truth;
  MetricsRow m;
  m.rmse = std::sqrt(err.squaredNorm() / jd);
  m.mae = err.cwiseAbs().sum() / jd;
  m.abs_bias = std::abs(err.sum() / jd);
  double covered = 0.0, length = 0.0;
  for (Eigen::Index k = 0; k < j; ++k) {
    const Interval& iv = intervals[static_cast<std::size_t>(k)];
    covered += iv.contains(truth[k]) ? 1.0 : 0.0;
    length += iv.length();
  }
  m.coverage = covered / jd;
  m.avg_length = length / jd;
  m.multi_cover = truth_in_region ? 1.0 : 0.0;
  m.vol_root = std::pow(volume, 1.0 / jd);
  return m;
}

MetricsRow evaluate_metrics(const PosteriorSummary& summary,
                            const Vector& truth) {
  return evaluate_metrics(summary.delta_mean, summary.marginal_intervals,
                          region_contains(summary, truth), summary.volume,
                          truth);
}

MetricsRow mean_metrics(const std::vector<ReplicateRecord>& rows) {
  MetricsRow m;
  double count = 0.0;
  for (const auto& r : rows) {
    if (r.failed) continue;
    m.rmse += r.metrics.rmse;
    m.mae += r.metrics.mae;
    m.abs_bias += r.metrics.abs_bias;
    m.coverage += r.metrics.coverage;
    m.avg_length += r.metrics.avg_length;
    m.multi_cover += r.metrics.multi_cover;
    m.vol_root += r.metrics.vol_root;
    count += 1.0;
  }
  if (count == 0.0) {
    const double nan = std::nan("");
    return {nan, nan, nan, nan, nan, nan, nan};
  }
  m.rmse /= count;
  m.mae /= count;
  m.abs_bias /= count;
  m.coverage /= count;
  m.avg_length /= count;
  m.multi_cover /= count;
  m.vol_root /= count;
  return m;
}

StudyReport run_study(const Generator& generator, const StudyOptions& options) {
  if (options.replications < 1) {
    throw Error(ErrorCategory::kConfig, "replications must be >= 1");
  }
  if (options.cut) options.cut->validate();
  const auto reps = static_cast<std::size_t>(options.replications);
  std::vector<ReplicateRecord> plain(reps), cut(reps);
  std::mutex hook_mutex;

  auto run_one = [&](std::size_t r) {
    const std::uint64_t seed = options.base_seed + r;
    const int id = static_cast<int>(r);
    plain[r].replicate = id;
    cut[r].replicate = id;
    std::optional<SimulatedData> sim;
    try {
      Rng rng = make_rng(seed, Stream::kData);
      sim.emplace(generator(rng));
    } catch (const std::exception& e) {
      plain[r] = {id, true, e.what(), {}};
      cut[r] = {id, true, e.what(), {}};
      return;
    }
    auto run_method = [&](const std::string& method,
                          const std::optional<WindowPolicy>& window,
                          ReplicateRecord& record) {
      try {
        FitOptions fo;
        fo.sampler = options.sampler;
        fo.sampler.seed = seed;
        fo.window = window;
        fo.alpha = options.alpha;
        const FitResult result = fit(sim->data, fo);
        record.metrics = evaluate_metrics(result.summary, sim->truth.delta);
        if (options.hook) {
          std::lock_guard<std::mutex> lock(hook_mutex);
          options.hook(id, method, result, sim->truth);
        }
      } catch (const std::exception& e) {
        record.failed = true;
        record.error = e.what();
      }
    };
    run_method("hgpr", std::nullopt, plain[r]);
    if (options.cut) run_method("hgpr-cut", options.cut, cut[r]);
  };

  const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
  if (workers == 1) {
    for (std::size_t r = 0; r < reps; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, reps); ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < reps; r = next++) run_one(r);
      });
    }
    for (auto& t : pool) t.join();
  }

  auto make_report = [](std::string method, std::vector<ReplicateRecord> rows) {
    MethodReport report;
    report.method = std::move(method);
    report.mean = mean_metrics(rows);
    report.failed = static_cast<int>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.failed; }));
    report.replicates = std::move(rows);
    return report;
  };
  StudyReport report;
  report.hgpr = make_report("hgpr", std::move(plain));
  if (options.cut) report.cut = make_report("hgpr-cut", std::move(cut));
  return report;
}

StudyReport run_study(const DgpSpec& spec, const StudyOptions& options) {
  spec.validate();
  return run_study([spec](Rng& rng) { return generate(spec, rng); }, options);
}

}  // namespace hgpr
