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

// hgpr command-line tool: `fit` a grouped sharp RDD dataset or `simulate`
// a replication study.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgpr/error.hpp"
#include "hgpr/fit.hpp"
#include "hgpr/io.hpp"
#include "hgpr/simulation.hpp"

namespace {

using nlohmann::json;

// Resolves one setting: an explicit flag wins over the config file, which
// wins over the default.
template <typename T>
T resolve(const CLI::App& app, const std::string& flag, const T& flag_value,
          const json& config, const std::string& key, const T& fallback) {
  if (app.count(flag) > 0) return flag_value;
  if (config.contains(key)) {
    try {
      return config.at(key).get<T>();
    } catch (const json::exception& e) {
      throw hgpr::Error(hgpr::ErrorCategory::kConfig,
                        "config key '" + key + "': " + e.what());
    }
  }
  return fallback;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    json j = json::parse(hgpr::read_text_file(path));
    if (!j.is_object()) {
      throw hgpr::Error(hgpr::ErrorCategory::kConfig, "config must be a JSON object");
    }
    return j;
  } catch (const json::exception& e) {
    throw hgpr::Error(hgpr::ErrorCategory::kConfig,
                      std::string("cannot parse config: ") + e.what());
  }
}

hgpr::KdeltaMode parse_kdelta(const std::string& s) {
  if (s == "se") return hgpr::KdeltaMode::kSeOverIndex;
  if (s == "diag") return hgpr::KdeltaMode::kDiagonal;
  throw hgpr::Error(hgpr::ErrorCategory::kConfig, "kdelta must be se or diag");
}

hgpr::SkewMode parse_skew(const std::string& s) {
  if (s == "none") return hgpr::SkewMode::kNone;
  if (s == "auto") return hgpr::SkewMode::kAuto;
  if (s == "right") return hgpr::SkewMode::kForceRight;
  if (s == "left") return hgpr::SkewMode::kForceLeft;
  throw hgpr::Error(hgpr::ErrorCategory::kConfig, "skew must be none, auto, right or left");
}

struct CommonFlags {
  std::string config_path;
  int iters = 3000;
  int burnin = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string kdelta = "se";
  double proposal_sd_log = 0.3;
  double proposal_sd_mu = 0.5;
  double cauchy_scale = 5.0;
  double mu_sd = 100.0;
  double window = 0.0;
  std::string skew = "none";
  double imbalance_ratio = 2.0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags take precedence");
  cmd->add_option("--iters", f.iters, "MCMC iterations");
  cmd->add_option("--burnin", f.burnin, "Iterations discarded as burn-in");
  cmd->add_option("--alpha", f.alpha, "Credible level is 1 - alpha");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--kdelta", f.kdelta, "Treatment-effect prior covariance: se|diag");
  cmd->add_option("--proposal-sd-log", f.proposal_sd_log, "Log-scale proposal sd");
  cmd->add_option("--proposal-sd-mu", f.proposal_sd_mu, "Proposal sd for mu");
  cmd->add_option("--cauchy-scale", f.cauchy_scale, "Half-Cauchy prior scale");
  cmd->add_option("--mu-sd", f.mu_sd, "Prior sd of mu");
  cmd->add_option("--window", f.window, "Half-width h of the window [-h, h]");
  cmd->add_option("--skew", f.skew, "Window skew handling: none|auto|right|left");
  cmd->add_option("--imbalance-ratio", f.imbalance_ratio, "Auto-skew trigger ratio");
  cmd->add_option("--out", f.out, "Output path");
}

struct Resolved {
  hgpr::SamplerConfig sampler;
  std::optional<hgpr::WindowPolicy> window;
  double alpha = 0.05;
  std::string out;
  json echo;
};

Resolved resolve_common(const CLI::App& app, const CommonFlags& f, const json& cfg,
                        bool seed_required) {
  Resolved r;
  if (seed_required && app.count("--seed") == 0 && !cfg.contains("seed")) {
    throw hgpr::Error(hgpr::ErrorCategory::kConfig, "--seed is required");
  }
  auto& s = r.sampler;
  s.iterations = resolve(app, "--iters", f.iters, cfg, "iters", 3000);
  s.burn_in = resolve(app, "--burnin", f.burnin, cfg, "burnin", 500);
  s.seed = resolve<std::uint64_t>(app, "--seed", f.seed, cfg, "seed", 0);
  const std::string kdelta = resolve<std::string>(app, "--kdelta", f.kdelta, cfg, "kdelta", "se");
  s.kdelta_mode = parse_kdelta(kdelta);
  s.proposal_sd_log = resolve(app, "--proposal-sd-log", f.proposal_sd_log, cfg, "proposal_sd_log", 0.3);
  s.proposal_sd_mu = resolve(app, "--proposal-sd-mu", f.proposal_sd_mu, cfg, "proposal_sd_mu", 0.5);
  s.prior.cauchy_scale = resolve(app, "--cauchy-scale", f.cauchy_scale, cfg, "cauchy_scale", 5.0);
  s.prior.mu_sd = resolve(app, "--mu-sd", f.mu_sd, cfg, "mu_sd", 100.0);
  r.alpha = resolve(app, "--alpha", f.alpha, cfg, "alpha", 0.05);
  r.out = resolve<std::string>(app, "--out", f.out, cfg, "out", "");
  if (r.out.empty()) throw hgpr::Error(hgpr::ErrorCategory::kConfig, "--out is required");

  const double window = resolve(app, "--window", f.window, cfg, "window", 0.0);
  const std::string skew = resolve<std::string>(app, "--skew", f.skew, cfg, "skew", "none");
  const double ratio = resolve(app, "--imbalance-ratio", f.imbalance_ratio, cfg, "imbalance_ratio", 2.0);
  if (window > 0.0) {
    r.window = hgpr::WindowPolicy{window, parse_skew(skew), ratio};
    r.window->validate();
  } else if (window < 0.0) {
    throw hgpr::Error(hgpr::ErrorCategory::kConfig, "--window must be positive");
  }

  r.echo = {{"iters", s.iterations},
            {"burnin", s.burn_in},
            {"seed", s.seed},
            {"kdelta", kdelta},
            {"proposal_sd_log", s.proposal_sd_log},
            {"proposal_sd_mu", s.proposal_sd_mu},
            {"cauchy_scale", s.prior.cauchy_scale},
            {"mu_sd", s.prior.mu_sd},
            {"alpha", r.alpha},
            {"window", r.window ? json(window) : json(nullptr)},
            {"skew", skew},
            {"imbalance_ratio", ratio}};
  return r;
}

int run_fit(const CLI::App& app, const CommonFlags& f, const std::string& input_flag,
            const std::string& trace_flag, bool rule_of_thumb) {
  const json cfg = load_config(f.config_path);
  Resolved r = resolve_common(app, f, cfg, true);
  const std::string input = resolve<std::string>(app, "--input", input_flag, cfg, "input", "");
  if (input.empty()) throw hgpr::Error(hgpr::ErrorCategory::kConfig, "--input is required");
  const std::string trace = resolve<std::string>(app, "--trace", trace_flag, cfg, "trace", "");

  std::vector<std::string> warnings;
  const auto raw = hgpr::read_observations_csv(input, &warnings);
  const hgpr::GroupedDataset data = hgpr::canonicalize(raw, &warnings);

  if (!r.window && resolve(app, "--window-rule-of-thumb", rule_of_thumb, cfg,
                           "window_rule_of_thumb", false)) {
    const double h = hgpr::rule_of_thumb_half_width(data);
    const std::string skew = r.echo["skew"].get<std::string>();
    r.window = hgpr::WindowPolicy{h, parse_skew(skew), r.echo["imbalance_ratio"].get<double>()};
    r.echo["window"] = h;
    r.echo["window_source"] = "rule_of_thumb_1.06_sd_n^-0.2";
  }
  r.echo["input"] = input;
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  hgpr::FitOptions options;
  options.sampler = r.sampler;
  options.window = r.window;
  options.alpha = r.alpha;
  const hgpr::FitResult result = hgpr::fit(data, options);
  hgpr::write_fit_report(hgpr::make_fit_report(result, r.echo, r.sampler.seed, warnings), r.out);
  if (!trace.empty()) hgpr::write_trace_csv(result.chain, trace);
  return 0;
}

struct SimFlags {
  std::string dgp = "dgp1";
  std::string delta_mode = "I";
  std::string error_mode = "A";
  int groups = 0;
  int per_group = 0;
  int reps = 1;
  int workers = 1;
};

int run_simulate(const CLI::App& app, const CommonFlags& f, const SimFlags& s) {
  const json cfg = load_config(f.config_path);
  Resolved r = resolve_common(app, f, cfg, true);
  const std::string dgp = resolve<std::string>(app, "--dgp", s.dgp, cfg, "dgp", "dgp1");
  hgpr::DgpSpec spec;
  if (dgp == "dgp1") spec = hgpr::DgpSpec::defaults(hgpr::DgpKind::kDgp1);
  else if (dgp == "dgp2") spec = hgpr::DgpSpec::defaults(hgpr::DgpKind::kDgp2);
  else if (dgp == "dgp3") spec = hgpr::DgpSpec::defaults(hgpr::DgpKind::kDgp3);
  else throw hgpr::Error(hgpr::ErrorCategory::kConfig, "--dgp must be dgp1, dgp2 or dgp3");

  const std::string dm = resolve<std::string>(app, "--delta-mode", s.delta_mode, cfg, "delta_mode", "I");
  const std::string em = resolve<std::string>(app, "--error-mode", s.error_mode, cfg, "error_mode", "A");
  if (dm != "I" && dm != "II") throw hgpr::Error(hgpr::ErrorCategory::kConfig, "--delta-mode must be I or II");
  if (em != "A" && em != "B") throw hgpr::Error(hgpr::ErrorCategory::kConfig, "--error-mode must be A or B");
  spec.delta_mode = dm == "I" ? hgpr::DeltaMode::kI : hgpr::DeltaMode::kII;
  spec.error_mode = em == "A" ? hgpr::ErrorMode::kA : hgpr::ErrorMode::kB;
  spec.groups = resolve(app, "--groups", s.groups, cfg, "groups", spec.groups);
  spec.per_group = resolve(app, "--per-group", s.per_group, cfg, "per_group", spec.per_group);
  spec.kdelta_mode = r.sampler.kdelta_mode;
  spec.validate();

  hgpr::StudyOptions options;
  options.replications = resolve(app, "--reps", s.reps, cfg, "reps", 1);
  options.workers = resolve(app, "--workers", s.workers, cfg, "workers", 1);
  options.sampler = r.sampler;
  options.cut = r.window;
  options.base_seed = r.sampler.seed;
  options.alpha = r.alpha;
  const hgpr::StudyReport report = hgpr::run_study(spec, options);

  hgpr::write_study_csv(report.hgpr, r.out);
  std::cerr << "hgpr: " << report.hgpr.failed << " of " << options.replications
            << " replicate(s) failed\n";
  if (report.cut) {
    const std::string cut_path = r.out + ".cut.csv";
    hgpr::write_study_csv(*report.cut, cut_path);
    std::cerr << "hgpr-cut: " << report.cut->failed << " of " << options.replications
              << " replicate(s) failed; table in " << cut_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical Gaussian process regression for grouped sharp RDDs"};
  app.require_subcommand(1);

  CommonFlags fit_flags;
  std::string input, trace;
  bool rule_of_thumb = false;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a grouped RDD dataset from CSV");
  add_common(fit_cmd, fit_flags);
  fit_cmd->add_option("--input", input, "CSV with columns y, z, group (optional t)");
  fit_cmd->add_option("--trace", trace, "Write the retained draws as CSV");
  fit_cmd->add_flag("--window-rule-of-thumb", rule_of_thumb,
                    "Use h = 1.06 sd(z) N^(-1/5) when --window is absent");

  CommonFlags sim_flags;
  SimFlags sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a replication study");
  add_common(sim_cmd, sim_flags);
  sim_cmd->add_option("--dgp", sim.dgp, "dgp1|dgp2|dgp3");
  sim_cmd->add_option("--delta-mode", sim.delta_mode, "DGP3 effects: I|II");
  sim_cmd->add_option("--error-mode", sim.error_mode, "DGP3 errors: A|B");
  sim_cmd->add_option("--groups", sim.groups, "Number of groups J");
  sim_cmd->add_option("--per-group", sim.per_group, "Observations per group");
  sim_cmd->add_option("--reps", sim.reps, "Replications");
  sim_cmd->add_option("--workers", sim.workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*fit_cmd) return run_fit(*fit_cmd, fit_flags, input, trace, rule_of_thumb);
    return run_simulate(*sim_cmd, sim_flags, sim);
  } catch (const hgpr::Error& e) {
    std::cerr << "error: " << hgpr::category_name(e.category()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
