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

#include "hgpr/fit.hpp"

namespace hgpr {

FitResult fit(const GroupedDataset& data, const FitOptions& options) {
  std::optional<Window> window;
  GroupedDataset used = data;
  if (options.window) {
    CutResult cut = apply_cut(data, *options.window);
    used = std::move(cut.data);
    window = cut.window;
  }
  Chain chain = run_chain(used, options.sampler);
  PosteriorSummary summary = summarize(chain, options.alpha);
  const SharpNullTest sharp = test_sharp_null(summary);
  const HomogeneousNullTest homogeneous = test_homogeneous_null(summary);
  return FitResult{std::move(used), window,      std::move(chain),
                   std::move(summary), sharp, homogeneous};
}

}  // namespace hgpr
