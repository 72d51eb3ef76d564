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

#include "hgpr/dataset.hpp"

namespace hgpr {

enum class SkewMode { kNone, kAuto, kForceRight, kForceLeft };

struct WindowPolicy {
  double half_width = 0.0;
  SkewMode skew = SkewMode::kNone;
  /// Auto mode doubles the sparse side when, after the symmetric cut, one
  /// side has fewer than (other side) / imbalance_ratio observations.
  double imbalance_ratio = 2.0;

  void validate() const;
};

/// Closed interval [lower, upper] on the running variable.
struct Window {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double z) const { return lower <= z && z <= upper; }
};

Window resolve_window(const GroupedDataset& data, const WindowPolicy& policy);

/// Rows with z inside the window. Throws Error(kDataset) when a group is
/// left without control or without treated observations.
GroupedDataset apply_window(const GroupedDataset& data, const Window& window);

struct CutResult {
  GroupedDataset data;
  Window window;
};

CutResult apply_cut(const GroupedDataset& data, const WindowPolicy& policy);

/// 1.06 sd(z) N^(-1/5). A fallback when no bandwidth is supplied; this is
/// not an Imbens-Kalyanaraman bandwidth.
double rule_of_thumb_half_width(const GroupedDataset& data);

}  // namespace hgpr
