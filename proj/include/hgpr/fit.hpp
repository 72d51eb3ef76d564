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

#include <optional>

#include "hgpr/dataset.hpp"
#include "hgpr/inference.hpp"
#include "hgpr/sampler.hpp"
#include "hgpr/windowing.hpp"

namespace hgpr {

struct FitOptions {
  SamplerConfig sampler;
  std::optional<WindowPolicy> window;
  double alpha = 0.05;
};

struct FitResult {
  GroupedDataset data;  // after windowing
  std::optional<Window> window;
  Chain chain;
  PosteriorSummary summary;
  SharpNullTest sharp_null;
  HomogeneousNullTest homogeneous_null;
};

/// Cuts to the window when one is given, then runs one chain and tests both
/// nulls against the level 1 - alpha region.
FitResult fit(const GroupedDataset& data, const FitOptions& options);

}  // namespace hgpr
