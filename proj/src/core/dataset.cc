/*
 * Copyright 2026 The dcbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dcbench/core/dataset.h"

#include <algorithm>
#include <utility>

#include "dcbench/core/error.h"

namespace dcbench {

Dataset::Dataset(std::string id, int dim, std::vector<std::string> classes,
                 std::vector<Example> examples)
    : id_(std::move(id)),
      dim_(dim),
      classes_(std::move(classes)),
      examples_(std::move(examples)) {
  if (dim_ <= 0) throw Error(ErrorCode::kInvalidSpec, "dim must be positive");
  std::sort(examples_.begin(), examples_.end(),
            [](const Example& a, const Example& b) { return a.id < b.id; });
  index_.reserve(examples_.size());
  const int num_classes = static_cast<int>(classes_.size());
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const Example& e = examples_[i];
    if (i > 0 && examples_[i - 1].id == e.id) {
      throw Error(ErrorCode::kDuplicateExample, e.id);
    }
    if (static_cast<int>(e.features.size()) != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "example " + e.id + " has " +
                      std::to_string(e.features.size()) + " features, want " +
                      std::to_string(dim_));
    }
    if (e.label && (*e.label < 0 || *e.label >= num_classes)) {
      throw Error(ErrorCode::kUnknownClass,
                  "example " + e.id + " label " + std::to_string(*e.label));
    }
    index_.emplace(e.id, i);
  }
}

std::optional<std::size_t> Dataset::find(std::string_view example_id) const {
  auto it = index_.find(std::string(example_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Dataset::class_index(std::string_view name) const {
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (classes_[c] == name) return static_cast<int>(c);
  }
  return std::nullopt;
}

bool Dataset::has_missing_features() const {
  for (const Example& e : examples_) {
    for (double v : e.features) {
      if (is_missing(v)) return true;
    }
  }
  return false;
}

bool Dataset::fully_labeled() const {
  return std::all_of(examples_.begin(), examples_.end(),
                     [](const Example& e) { return e.label.has_value(); });
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(examples_.size());
  for (const Example& e : examples_) {
    if (!e.label) throw Error(ErrorCode::kMissingLabel, e.id);
    out.push_back(*e.label);
  }
  return out;
}

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  out.reserve(examples_.size());
  for (const Example& e : examples_) out.push_back(e.id);
  return out;
}

Dataset Dataset::subset(std::span<const std::string> example_ids) const {
  std::vector<Example> picked;
  picked.reserve(example_ids.size());
  for (const std::string& id : example_ids) {
    auto i = find(id);
    if (!i) throw Error(ErrorCode::kUnknownExample, id);
    picked.push_back(examples_[*i]);
  }
  return Dataset(id_, dim_, classes_, std::move(picked));
}

Dataset Dataset::subset_by_index(std::span<const std::size_t> indices) const {
  std::vector<Example> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(examples_.at(i));
  return Dataset(id_, dim_, classes_, std::move(picked));
}

Dataset Dataset::without_labels() const {
  std::vector<Example> copy = examples_;
  for (Example& e : copy) e.label.reset();
  return Dataset(id_, dim_, classes_, std::move(copy));
}

Dataset Dataset::with_id(std::string id) const {
  Dataset copy = *this;
  copy.id_ = std::move(id);
  return copy;
}

namespace {

bool same_feature(double a, double b) {
  return (is_missing(a) && is_missing(b)) || a == b;
}

}  // namespace

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.id_ != b.id_ || a.dim_ != b.dim_ || a.classes_ != b.classes_ ||
      a.examples_.size() != b.examples_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.examples_.size(); ++i) {
    const Example& x = a.examples_[i];
    const Example& y = b.examples_[i];
    if (x.id != y.id || x.label != y.label) return false;
    for (std::size_t j = 0; j < x.features.size(); ++j) {
      if (!same_feature(x.features[j], y.features[j])) return false;
    }
  }
  return true;
}

Dataset merge(std::string id, const Dataset& a, const Dataset& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "merge of unequal dims");
  }
  if (a.classes() != b.classes()) {
    throw Error(ErrorCode::kUnknownClass, "merge of unequal class lists");
  }
  std::vector<Example> all = a.examples();
  all.insert(all.end(), b.examples().begin(), b.examples().end());
  return Dataset(std::move(id), a.dim(), a.classes(), std::move(all));
}

FeatureMatrix feature_matrix(const Dataset& data) {
  FeatureMatrix m;
  m.rows = data.size();
  m.cols = static_cast<std::size_t>(data.dim());
  m.values.reserve(m.rows * m.cols);
  for (const Example& e : data.examples()) {
    for (double v : e.features) {
      if (is_missing(v)) throw Error(ErrorCode::kMissingFeature, e.id);
      m.values.push_back(v);
    }
  }
  return m;
}

}  // namespace dcbench
