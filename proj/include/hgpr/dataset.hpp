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
#include <string>
#include <vector>

#include "hgpr/linalg.hpp"

namespace hgpr {

/// One unit of a sharp regression discontinuity design with the cutoff
/// fixed at z = 0.
struct Observation {
  double y = 0.0;
  double z = 0.0;
  bool treated = false;
  std::string group;
};

struct GroupCounts {
  std::size_t control = 0;
  std::size_t treated = 0;

  std::size_t total() const { return control + treated; }
};

/// Observations in canonical order: every control unit (group 1..J, input
/// order kept within a group) followed by every treated unit (group 1..J).
///
/// Group indices are 0-based internally; labels() maps an index back to the
/// label it had in the input. The constructor rejects data that is not in
/// canonical order.
class GroupedDataset {
 public:
  GroupedDataset(Vector y, Vector z, std::vector<int> group,
                 std::vector<std::string> labels);

  std::size_t size() const { return static_cast<std::size_t>(y_.size()); }
  std::size_t n_control() const { return n_control_; }
  std::size_t n_treated() const { return size() - n_control_; }
  int num_groups() const { return static_cast<int>(labels_.size()); }

  const Vector& y() const { return y_; }
  const Vector& z() const { return z_; }
  const std::vector<int>& group() const { return group_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<GroupCounts>& counts() const { return counts_; }

  bool treated(std::size_t i) const { return i >= n_control_; }

  /// Same design (z, groups) with a different outcome vector.
  GroupedDataset with_outcomes(Vector y) const;

  std::vector<Observation> observations() const;

 private:
  Vector y_;
  Vector z_;
  std::vector<int> group_;
  std::vector<std::string> labels_;
  std::vector<GroupCounts> counts_;
  std::size_t n_control_ = 0;
};

/// Reorders raw observations into canonical order. Group labels are numbered
/// by first appearance. The treatment flag is recomputed as z >= 0; every
/// disagreement with the input flag is reported through `warnings`.
GroupedDataset canonicalize(const std::vector<Observation>& raw,
                            std::vector<std::string>* warnings = nullptr);

/// Keeps rows where keep[i] is true and re-canonicalizes, preserving label
/// order. Throws if a group loses every observation.
GroupedDataset subset(const GroupedDataset& data, const std::vector<bool>& keep);

}  // namespace hgpr
