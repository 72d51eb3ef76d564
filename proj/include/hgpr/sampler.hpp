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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgpr/dataset.hpp"
#include "hgpr/likelihood_cache.hpp"
#include "hgpr/rng.hpp"
#include "hgpr/theta.hpp"

namespace hgpr {

struct SamplerConfig {
  int iterations = 3000;
  int burn_in = 500;
  double proposal_sd_log = 0.3;
  double proposal_sd_mu = 0.5;
  std::uint64_t seed = 0;
  KdeltaMode kdelta_mode = KdeltaMode::kSeOverIndex;
  PriorConfig prior;

  /// Starting point; drawn from the prior when empty.
  std::optional<Theta> initial_theta;
  /// Coordinates held fixed at their initial value. Empty means none.
  std::vector<bool> frozen;

  void validate(int num_groups) const;
  bool is_frozen(std::size_t k) const { return k < frozen.size() && frozen[k]; }
};

struct ChainSample {
  Theta theta;
  Vector delta;
};

struct Chain {
  std::vector<ChainSample> samples;  // post burn-in
  std::vector<double> acceptance_rates;
  int burn_in_used = 0;
  std::size_t numerical_rejections = 0;
  std::vector<std::string> warnings;

  /// samples.size() x J
  Matrix delta_draws() const;
  /// samples.size() x (2J + 7)
  Matrix theta_draws() const;
};

struct Proposal {
  double candidate = 0.0;
  double log_correction = 0.0;
};

/// Normal random walk for mu; for a positive coordinate a normal step on the
/// log scale, whose Hastings correction is log(candidate) - log(current).
Proposal propose(std::size_t coord, double current, const SamplerConfig& cfg,
                 Rng& rng);

double proposal_log_correction(std::size_t coord, double current,
                               double candidate);

enum class StepOutcome { kAccepted, kRejected, kNumericalFailure };

/// One Metropolis update of coordinate `coord` with the given proposal and
/// uniform log_u. Factorization failures of the candidate are rejections.
StepOutcome metropolis_step(LikelihoodCache& cache, std::size_t coord,
                            const Proposal& proposal, double log_u,
                            const PriorConfig& prior);

struct SweepResult {
  std::vector<bool> accepted;
  std::size_t numerical_rejections = 0;
};

/// Visits every non-frozen coordinate once in flat order.
SweepResult mh_sweep(LikelihoodCache& cache, const SamplerConfig& cfg,
                     Rng& rng);

/// Half-Cauchy draws for the positive entries (redrawn while above 1e6) and
/// N(0, mu_sd^2) for mu.
Theta draw_theta_from_prior(int num_groups, const PriorConfig& prior, Rng& rng);

inline constexpr double kPriorDrawCap = 1e6;

/// Exact draw from N(post.mean, post.cov).
Vector draw_delta(const DeltaPosterior& post, Rng& rng);

Chain run_chain(const GroupedDataset& data, const SamplerConfig& cfg);

}  // namespace hgpr
