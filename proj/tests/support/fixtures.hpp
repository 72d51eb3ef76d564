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

#include <string>
#include <vector>

#include "hgpr/dataset.hpp"
#include "hgpr/theta.hpp"

namespace hgpr::fixture {

// Two groups, three rows each, interleaved on input. Canonical order is
// ctrl g1, ctrl g2, trt g1, trt g2.
inline std::vector<Observation> six_rows() {
  return {
      {0.40, -0.30, false, "a"}, {1.10, 0.20, true, "b"},
      {0.90, 0.50, true, "a"},   {-0.20, -0.60, false, "b"},
      {0.15, -0.10, false, "a"}, {1.35, 0.70, true, "b"},
  };
}

inline GroupedDataset six_row_dataset() { return canonicalize(six_rows()); }

inline Theta moderate_theta(int J) {
  Theta th(J);
  th.mu = 0.4;
  for (int j = 0; j < J; ++j) {
    th.sigma_minus_sq[j] = 0.05 + 0.01 * j;
    th.sigma_plus_sq[j] = 0.08 + 0.02 * j;
  }
  th.delta_kernel = {0.9, 0.5};
  th.f_kernel = {0.6, 2.0};
  th.g_kernel = {1.2, 0.8};
  return th;
}

// Deterministic grid of running values per group with a mild outcome trend.
inline GroupedDataset grid_dataset(int J, int per_side, double spread = 1.0) {
  std::vector<Observation> obs;
  for (int j = 0; j < J; ++j) {
    for (int i = 0; i < per_side; ++i) {
      const double u = (i + 0.5 + 0.13 * j) / per_side;
      obs.push_back({0.3 * j - 0.5 * u + 0.05 * ((i * 7 + j) % 5), -spread * u, false,
                     "g" + std::to_string(j)});
      obs.push_back({0.3 * j + 0.8 + 0.4 * u - 0.04 * ((i * 3 + j) % 4), spread * u, true,
                     "g" + std::to_string(j)});
    }
  }
  return canonicalize(obs);
}

}  // namespace hgpr::fixture
