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

#include "hgpr/sampler.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hgpr/error.hpp"
#include "hgpr/model.hpp"

namespace hgpr {

namespace {

constexpr std::size_t kMaxStoredWarnings = 20;

}  // namespace

void SamplerConfig::validate(int num_groups) const {
  if (iterations <= 0) {
    throw Error(ErrorCategory::kConfig, "iterations must be positive");
  }
  if (burn_in < 0 || burn_in >= iterations) {
    throw Error(ErrorCategory::kConfig, "burn_in must lie in [0, iterations)");
  }
  if (!(proposal_sd_log > 0.0 && std::isfinite(proposal_sd_log)) ||
      !(proposal_sd_mu > 0.0 && std::isfinite(proposal_sd_mu))) {
    throw Error(ErrorCategory::kConfig, "proposal sds must be positive");
  }
  prior.validate();
  const std::size_t dim = 2 * static_cast<std::size_t>(num_groups) + 7;
  if (!frozen.empty() && frozen.size() != dim) {
    throw Error(ErrorCategory::kConfig, "frozen mask must have 2J + 7 entries");
  }
  if (initial_theta) {
    if (initial_theta->num_groups() != num_groups) {
      throw Error(ErrorCategory::kConfig,
                  "initial theta has the wrong number of groups");
    }
    initial_theta->validate();
  }
}

Matrix Chain::delta_draws() const {
  if (samples.empty()) return Matrix();
  const auto j = samples.front().delta.size();
  Matrix out(static_cast<Eigen::Index>(samples.size()), j);
  for (std::size_t t = 0; t < samples.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) = samples[t].delta.transpose();
  }
  return out;
}

Matrix Chain::theta_draws() const {
  if (samples.empty()) return Matrix();
  const auto dim = static_cast<Eigen::Index>(samples.front().theta.dimension());
  Matrix out(static_cast<Eigen::Index>(samples.size()), dim);
  for (std::size_t t = 0; t < samples.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) =
        samples[t].theta.to_vector().transpose();
  }
  return out;
}

double proposal_log_correction(std::size_t coord, double current,
                               double candidate) {
  if (!is_positive_coordinate(coord)) return 0.0;
  return std::log(candidate) - std::log(current);
}

Proposal propose(std::size_t coord, double current, const SamplerConfig& cfg,
                 Rng& rng) {
  std::normal_distribution<double> step(0.0, 1.0);
  const double eps = step(rng);
  Proposal p;
  if (!is_positive_coordinate(coord)) {
    p.candidate = current + cfg.proposal_sd_mu * eps;
    p.log_correction = 0.0;
  } else {
    p.candidate = std::exp(std::log(current) + cfg.proposal_sd_log * eps);
    p.log_correction = proposal_log_correction(coord, current, p.candidate);
  }
  return p;
}

StepOutcome metropolis_step(LikelihoodCache& cache, std::size_t coord,
                            const Proposal& proposal, double log_u,
                            const PriorConfig& prior) {
  const double current =
      cache.log_marginal() + log_prior(cache.theta(), prior);
  std::optional<LikelihoodCache::Candidate> candidate;
  try {
    candidate.emplace(cache.evaluate(coord, proposal.candidate));
  } catch (const Error&) {
    return StepOutcome::kNumericalFailure;
  }
  const double proposed =
      candidate->log_marginal() + log_prior(candidate->theta(), prior);
  const double log_ratio = proposed - current + proposal.log_correction;
  if (std::isnan(log_ratio)) return StepOutcome::kNumericalFailure;
  if (log_u < log_ratio) {
    cache.commit(std::move(*candidate));
    return StepOutcome::kAccepted;
  }
  return StepOutcome::kRejected;
}

SweepResult mh_sweep(LikelihoodCache& cache, const SamplerConfig& cfg,
                     Rng& rng) {
  const std::size_t dim = cache.theta().dimension();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SweepResult result;
  result.accepted.assign(dim, false);
  for (std::size_t k = 0; k < dim; ++k) {
    if (cfg.is_frozen(k)) continue;
    const Proposal p = propose(k, cache.theta().get(k), cfg, rng);
    const double log_u = std::log(unif(rng));
    switch (metropolis_step(cache, k, p, log_u, cfg.prior)) {
      case StepOutcome::kAccepted: result.accepted[k] = true; break;
      case StepOutcome::kRejected: break;
      case StepOutcome::kNumericalFailure: ++result.numerical_rejections; break;
    }
  }
  return result;
}

Theta draw_theta_from_prior(int num_groups, const PriorConfig& prior,
                            Rng& rng) {
  prior.validate();
  Theta theta(num_groups);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, prior.mu_sd);
  theta.mu = normal(rng);
  for (std::size_t k = 1; k < theta.dimension(); ++k) {
    double x = 0.0;
    do {
      // |scale * tan(pi (u - 1/2))| is half-Cauchy(scale)
      x = std::abs(prior.cauchy_scale *
                   std::tan(std::numbers::pi * (unif(rng) - 0.5)));
    } while (!(x > 0.0) || x > kPriorDrawCap);
    theta.set(k, x);
  }
  return theta;
}

Vector draw_delta(const DeltaPosterior& post, Rng& rng) {
  const SpdFactor factor(post.cov);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector eps(post.mean.size());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = normal(rng);
  return post.mean + factor.lower() * eps;
}

Chain run_chain(const GroupedDataset& data, const SamplerConfig& cfg) {
  const int num_groups = data.num_groups();
  cfg.validate(num_groups);
  Rng rng = make_rng(cfg.seed, Stream::kChain);

  const Theta start = cfg.initial_theta
                          ? *cfg.initial_theta
                          : draw_theta_from_prior(num_groups, cfg.prior, rng);
  LikelihoodCache cache(data, start, cfg.kdelta_mode);

  const std::size_t dim = start.dimension();
  std::vector<std::size_t> accepted(dim, 0);
  Chain chain;
  chain.burn_in_used = cfg.burn_in;
  chain.samples.reserve(static_cast<std::size_t>(cfg.iterations - cfg.burn_in));

  for (int t = 0; t < cfg.iterations; ++t) {
    const SweepResult sweep = mh_sweep(cache, cfg, rng);
    for (std::size_t k = 0; k < dim; ++k) accepted[k] += sweep.accepted[k];
    if (sweep.numerical_rejections > 0) {
      chain.numerical_rejections += sweep.numerical_rejections;
      if (chain.warnings.size() < kMaxStoredWarnings) {
        std::ostringstream msg;
        msg << "iteration " << t << ": " << sweep.numerical_rejections
            << " proposal(s) rejected after a factorization failure";
        chain.warnings.push_back(msg.str());
      }
    }
    Vector delta = draw_delta(cache.delta_posterior(), rng);
    if (t >= cfg.burn_in) {
      chain.samples.push_back({cache.theta(), std::move(delta)});
    }
  }

  chain.acceptance_rates.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    chain.acceptance_rates[k] =
        static_cast<double>(accepted[k]) / static_cast<double>(cfg.iterations);
  }
  return chain;
}

}  // namespace hgpr
