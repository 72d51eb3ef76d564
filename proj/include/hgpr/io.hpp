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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hgpr/dataset.hpp"
#include "hgpr/fit.hpp"
#include "hgpr/inference.hpp"
#include "hgpr/sampler.hpp"
#include "hgpr/simulation.hpp"
#include "hgpr/windowing.hpp"

namespace hgpr {

/// Reads observations from a CSV file with a header row.
///
/// Required columns (any case): y, z, group. Optional column t (0/1 or
/// true/false) is checked against z >= 0 and a mismatch becomes a warning.
/// Any row whose y or z is not a finite number makes the whole read fail;
/// the error lists the offending line numbers.
std::vector<Observation> read_observations_csv(
    const std::string& path, std::vector<std::string>* warnings = nullptr);

std::vector<Observation> parse_observations_csv(
    const std::string& text, std::vector<std::string>* warnings = nullptr);

/// Writes columns y,z,t,group.
void write_observations_csv(const std::string& path,
                            const std::vector<Observation>& observations);

/// %.17g
std::string format_double(double v);

struct FitReport {
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<std::string> labels;
  std::vector<GroupCounts> counts;
  std::optional<Window> window;
  PosteriorSummary summary;
  SharpNullTest sharp_null;
  HomogeneousNullTest homogeneous_null;
  std::vector<std::pair<std::string, double>> acceptance_rates;
  std::size_t numerical_rejections = 0;
  std::vector<std::string> warnings;
};

FitReport make_fit_report(const FitResult& result, const nlohmann::json& config,
                          std::uint64_t seed,
                          std::vector<std::string> warnings = {});

nlohmann::json fit_report_to_json(const FitReport& report);
FitReport fit_report_from_json(const nlohmann::json& j);

void write_fit_report(const FitReport& report, const std::string& path);
FitReport read_fit_report(const std::string& path);

/// One row per retained iteration: iteration, every theta coordinate,
/// delta_1..delta_J.
void write_trace_csv(const Chain& chain, const std::string& path);
std::string trace_csv(const Chain& chain);

/// Columns: replicate plus the MetricsRow fields. One row per successful
/// replicate, then a row with replicate = "mean".
void write_study_csv(const MethodReport& report, const std::string& path);
std::string study_csv(const MethodReport& report);

inline const std::vector<std::string>& study_csv_columns() {
  static const std::vector<std::string> cols{
      "replicate", "rmse", "mae", "abs_bias", "coverage",
      "avg_length", "multi_cover", "vol_root"};
  return cols;
}

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace hgpr
