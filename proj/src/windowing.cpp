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

#include "hgpr/windowing.hpp"

#include <cmath>

#include "hgpr/error.hpp"

namespace hgpr {

void WindowPolicy::validate() const {
  if (!(half_width > 0.0 && std::isfinite(half_width))) {
    throw Error(ErrorCategory::kConfig, "window half-width must be positive");
  }
  if (!(imbalance_ratio > 1.0 && std::isfinite(imbalance_ratio))) {
    throw Error(ErrorCategory::kConfig, "imbalance ratio must exceed 1");
  }
}

Window resolve_window(const GroupedDataset& data, const WindowPolicy& policy) {
  policy.validate();
  const double h = policy.half_width;
  switch (policy.skew) {
    case SkewMode::kNone: return {-h, h};
    case SkewMode::kForceRight: return {-h, 2.0 * h};
    case SkewMode::kForceLeft: return {-2.0 * h, h};
    case SkewMode::kAuto: break;
  }
  std::size_t control = 0, treated = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = data.z()[static_cast<Eigen::Index>(i)];
    if (z < -h || z > h) continue;
    (z >= 0.0 ? treated : control) += 1;
  }
  const double ratio = policy.imbalance_ratio;
  if (static_cast<double>(treated) < static_cast<double>(control) / ratio) {
    return {-h, 2.0 * h};
  }
  if (static_cast<double>(control) < static_cast<double>(treated) / ratio) {
    return {-2.0 * h, h};
  }
  return {-h, h};
}

GroupedDataset apply_window(const GroupedDataset& data, const Window& window) {
  std::vector<bool> keep(data.size());
  std::vector<GroupCounts> counts(static_cast<std::size_t>(data.num_groups()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    keep[i] = window.contains(data.z()[static_cast<Eigen::Index>(i)]);
    if (!keep[i]) continue;
    auto& c = counts[static_cast<std::size_t>(data.group()[i])];
    (data.treated(i) ? c.treated : c.control) += 1;
  }
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j].control == 0 || counts[j].treated == 0) {
      throw Error(ErrorCategory::kDataset,
                  "window leaves group '" + data.labels()[j] +
                      "' without " +
                      (counts[j].control == 0 ? "control" : "treated") +
                      " observations");
    }
  }
  return subset(data, keep);
}

CutResult apply_cut(const GroupedDataset& data, const WindowPolicy& policy) {
  const Window window = resolve_window(data, policy);
  return {apply_window(data, window), window};
}

double rule_of_thumb_half_width(const GroupedDataset& data) {
  const Vector& z = data.z();
  const double n = static_cast<double>(z.size());
  if (n < 2) {
    throw Error(ErrorCategory::kDataset, "need at least two observations");
  }
  const double mean = z.mean();
  const double sd = std::sqrt((z.array() - mean).square().sum() / (n - 1.0));
  return 1.06 * sd * std::pow(n, -0.2);
}

}  // namespace hgpr
