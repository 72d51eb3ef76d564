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

#include "hgpr/dataset.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "hgpr/error.hpp"

namespace hgpr {

GroupedDataset::GroupedDataset(Vector y, Vector z, std::vector<int> group,
                               std::vector<std::string> labels)
    : y_(std::move(y)),
      z_(std::move(z)),
      group_(std::move(group)),
      labels_(std::move(labels)) {
  const auto n = static_cast<std::size_t>(y_.size());
  if (n == 0) {
    throw Error(ErrorCategory::kDataset, "dataset is empty");
  }
  if (static_cast<std::size_t>(z_.size()) != n || group_.size() != n) {
    throw Error(ErrorCategory::kInvalidArgument,
                "dataset arrays have mismatched lengths");
  }
  if (!y_.allFinite() || !z_.allFinite()) {
    throw Error(ErrorCategory::kDataset, "dataset has non-finite values");
  }
  const int num_groups = static_cast<int>(labels_.size());
  counts_.assign(labels_.size(), GroupCounts{});

  // Canonical order: control block then treated block, groups nondecreasing
  // within each block.
  std::size_t i = 0;
  int last_group = -1;
  for (; i < n && z_[static_cast<Eigen::Index>(i)] < 0.0; ++i) {
    const int g = group_[i];
    if (g < 0 || g >= num_groups) {
      throw Error(ErrorCategory::kInvalidArgument, "group index out of range");
    }
    if (g < last_group) {
      throw Error(ErrorCategory::kInvalidArgument,
                  "non-canonical ordering in control block");
    }
    last_group = g;
    ++counts_[static_cast<std::size_t>(g)].control;
  }
  n_control_ = i;
  last_group = -1;
  for (; i < n; ++i) {
    const int g = group_[i];
    if (z_[static_cast<Eigen::Index>(i)] < 0.0) {
      throw Error(ErrorCategory::kInvalidArgument,
                  "non-canonical ordering: control row after treated rows");
    }
    if (g < 0 || g >= num_groups) {
      throw Error(ErrorCategory::kInvalidArgument, "group index out of range");
    }
    if (g < last_group) {
      throw Error(ErrorCategory::kInvalidArgument,
                  "non-canonical ordering in treated block");
    }
    last_group = g;
    ++counts_[static_cast<std::size_t>(g)].treated;
  }
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    if (counts_[j].total() == 0) {
      throw Error(ErrorCategory::kDataset,
                  "group '" + labels_[j] + "' has no observations");
    }
  }
}

GroupedDataset GroupedDataset::with_outcomes(Vector y) const {
  if (y.size() != y_.size()) {
    throw Error(ErrorCategory::kInvalidArgument, "outcome length mismatch");
  }
  return GroupedDataset(std::move(y), z_, group_, labels_);
}

std::vector<Observation> GroupedDataset::observations() const {
  std::vector<Observation> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out.push_back({y_[k], z_[k], treated(i),
                   labels_[static_cast<std::size_t>(group_[i])]});
  }
  return out;
}

namespace {

GroupedDataset build_canonical(const std::vector<double>& ys,
                               const std::vector<double>& zs,
                               const std::vector<int>& groups,
                               std::vector<std::string> labels) {
  const std::size_t n = ys.size();
  const std::size_t num_groups = labels.size();
  // Bucket sort by (treated, group) keeps the input order within a bucket.
  std::vector<std::vector<std::size_t>> buckets(2 * num_groups);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t side = zs[i] >= 0.0 ? 1 : 0;
    buckets[side * num_groups + static_cast<std::size_t>(groups[i])].push_back(i);
  }
  Vector y(static_cast<Eigen::Index>(n));
  Vector z(static_cast<Eigen::Index>(n));
  std::vector<int> g(n);
  Eigen::Index k = 0;
  for (const auto& bucket : buckets) {
    for (std::size_t i : bucket) {
      y[k] = ys[i];
      z[k] = zs[i];
      g[static_cast<std::size_t>(k)] = groups[i];
      ++k;
    }
  }
  return GroupedDataset(std::move(y), std::move(z), std::move(g),
                        std::move(labels));
}

}  // namespace

GroupedDataset canonicalize(const std::vector<Observation>& raw,
                            std::vector<std::string>* warnings) {
  if (raw.empty()) {
    throw Error(ErrorCategory::kDataset, "no observations");
  }
  std::unordered_map<std::string, int> index;
  std::vector<std::string> labels;
  std::vector<double> ys, zs;
  std::vector<int> groups;
  ys.reserve(raw.size());
  zs.reserve(raw.size());
  groups.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& obs = raw[i];
    if (!std::isfinite(obs.y) || !std::isfinite(obs.z)) {
      std::ostringstream msg;
      msg << "observation " << i << " has a non-finite y or z";
      throw Error(ErrorCategory::kDataset, msg.str());
    }
    const bool treated = obs.z >= 0.0;
    if (treated != obs.treated && warnings != nullptr) {
      std::ostringstream msg;
      msg << "observation " << i << ": treatment flag "
          << (obs.treated ? 1 : 0) << " disagrees with z = " << obs.z
          << "; using " << (treated ? 1 : 0);
      warnings->push_back(msg.str());
    }
    auto [it, inserted] =
        index.try_emplace(obs.group, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(obs.group);
    ys.push_back(obs.y);
    zs.push_back(obs.z);
    groups.push_back(it->second);
  }
  return build_canonical(ys, zs, groups, std::move(labels));
}

GroupedDataset subset(const GroupedDataset& data,
                      const std::vector<bool>& keep) {
  if (keep.size() != data.size()) {
    throw Error(ErrorCategory::kInvalidArgument, "subset mask length mismatch");
  }
  std::vector<double> ys, zs;
  std::vector<int> groups;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!keep[i]) continue;
    const auto k = static_cast<Eigen::Index>(i);
    ys.push_back(data.y()[k]);
    zs.push_back(data.z()[k]);
    groups.push_back(data.group()[i]);
  }
  if (ys.empty()) {
    throw Error(ErrorCategory::kDataset, "no observations left after filtering");
  }
  return build_canonical(ys, zs, groups, data.labels());
}

}  // namespace hgpr
