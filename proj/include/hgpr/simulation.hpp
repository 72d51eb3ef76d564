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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hgpr/dataset.hpp"
#include "hgpr/fit.hpp"
#include "hgpr/inference.hpp"
#include "hgpr/rng.hpp"
#include "hgpr/sampler.hpp"
#include "hgpr/theta.hpp"
#include "hgpr/windowing.hpp"

namespace hgpr {

enum class DgpKind { kDgp1, kDgp2, kDgp3, kWellSpecified };
enum class DeltaMode { kI, kII };
enum class ErrorMode { kA, kB };

struct DgpSpec {
  DgpKind kind = DgpKind::kDgp1;
  int groups = 10;
  int per_group = 100;
  DeltaMode delta_mode = DeltaMode::kI;
  ErrorMode error_mode = ErrorMode::kA;
  /// Hyperparameter truth, kWellSpecified only.
  std::optional<Theta> theta;
  KdeltaMode kdelta_mode = KdeltaMode::kSeOverIndex;

  /// Study defaults: DGP1 J=10, DGP2 J=25, DGP3 J=10, all with n_j = 100.
  static DgpSpec defaults(DgpKind kind);
  void validate() const;
};

/// What the generator actually drew, in the dataset's canonical row order.
struct TruthRecord {
  Vector delta;
  Vector f_values;  // f_j(z_i)
  Vector noise;     // epsilon_i
  Vector noise_sd;  // per group, for DGPs with a common sd on both sides
  /// Per-group conditional mean functions; empty for the well-specified
  /// generator, whose f_j only exist at the sampled z.
  std::vector<std::function<double(double)>> mean_functions;
};

struct SimulatedData {
  GroupedDataset data;
  TruthRecord truth;
};

double dgp1_mean(int group_one_based, double z);

SimulatedData gen_dgp1(int groups, int per_group, Rng& rng);
SimulatedData gen_dgp2(int groups, int per_group, Rng& rng);
SimulatedData gen_dgp3(int groups, int per_group, DeltaMode delta_mode,
                       ErrorMode error_mode, Rng& rng);

/// Draws (g, f_j, delta, epsilon) from the hierarchical GP model itself
/// with z ~ U(-1, 1).
SimulatedData gen_well_specified(int groups, int per_group, const Theta& theta,
                                 KdeltaMode mode, Rng& rng);

SimulatedData generate(const DgpSpec& spec, Rng& rng);

/// Standardized DGP3 error shape before scaling by sigma_j.
double draw_error_shape(ErrorMode mode, Rng& rng);

/// S_ij = rho^|i - j|
Matrix ar1_covariance(int n, double rho);

/// Knots of the DGP3 truncated-cubic basis: -0.9, -0.8, ..., 0.9.
std::vector<double> dgp3_knots();

struct MetricsRow {
  double rmse = 0.0;
  double mae = 0.0;
  double abs_bias = 0.0;
  double coverage = 0.0;
  double avg_length = 0.0;
  double multi_cover = 0.0;
  double vol_root = 0.0;
};

MetricsRow evaluate_metrics(const Vector& estimates,
                            const std::vector<Interval>& intervals,
                            bool truth_in_region, double volume,
                            const Vector& truth);

MetricsRow evaluate_metrics(const PosteriorSummary& summary,
                            const Vector& truth);

struct ReplicateRecord {
  int replicate = 0;
  bool failed = false;
  std::string error;
  MetricsRow metrics;
};

struct MethodReport {
  std::string method;
  std::vector<ReplicateRecord> replicates;
  MetricsRow mean;  // over successful replicates
  int failed = 0;
};

struct StudyReport {
  MethodReport hgpr;
  std::optional<MethodReport> cut;
};

using Generator = std::function<SimulatedData(Rng&)>;
using ReplicateHook = std::function<void(int replicate, const std::string& method,
                                         const FitResult& fit,
                                         const TruthRecord& truth)>;

struct StudyOptions {
  int replications = 1;
  SamplerConfig sampler;
  std::optional<WindowPolicy> cut;
  std::uint64_t base_seed = 0;
  double alpha = 0.05;
  int workers = 1;
  /// Called once per successful fit; calls are serialized.
  ReplicateHook hook;
};

/// Replicate r draws its data and runs its chains with seed base_seed + r.
StudyReport run_study(const Generator& generator, const StudyOptions& options);
StudyReport run_study(const DgpSpec& spec, const StudyOptions& options);

MetricsRow mean_metrics(const std::vector<ReplicateRecord>& rows);

}  // namespace hgpr
