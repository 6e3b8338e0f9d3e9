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

#ifndef DCBENCH_CORE_DATASET_H_
#define DCBENCH_CORE_DATASET_H_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dcbench {

// Marker for a NULL feature slot.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

struct Example {
  std::string id;
  std::vector<double> features;
  std::optional<int> label;  // empty when the label is hidden or unknown
};

// Embedding matrix plus labels keyed by stable example ids. Examples are kept
// sorted by id so every downstream computation is independent of the order
// the rows arrived in.
class Dataset {
 public:
  Dataset() = default;
  // Throws kDuplicateExample, kDimensionMismatch, kUnknownClass or
  // kInvalidSpec.
  Dataset(std::string id, int dim, std::vector<std::string> classes,
          std::vector<Example> examples);

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  int num_classes() const { return static_cast<int>(classes_.size()); }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<Example>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const Example& operator[](std::size_t i) const { return examples_[i]; }

  std::optional<std::size_t> find(std::string_view example_id) const;
  bool contains(std::string_view example_id) const {
    return find(example_id).has_value();
  }
  std::optional<int> class_index(std::string_view name) const;

  bool has_missing_features() const;
  bool fully_labeled() const;

  // Labels in canonical order; throws kMissingLabel if any is hidden.
  std::vector<int> labels() const;
  std::vector<std::string> ids() const;

  // Subset by ids; throws kUnknownExample.
  Dataset subset(std::span<const std::string> example_ids) const;
  Dataset subset_by_index(std::span<const std::size_t> indices) const;
  // Same examples with every label removed.
  Dataset without_labels() const;
  Dataset with_id(std::string id) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::string id_;
  int dim_ = 0;
  std::vector<std::string> classes_;
  std::vector<Example> examples_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Concatenation; class lists and dims must match, ids must stay unique.
Dataset merge(std::string id, const Dataset& a, const Dataset& b);

// Row-major dense copy of the features. Throws kMissingFeature on NULL.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }
};
FeatureMatrix feature_matrix(const Dataset& data);

}  // namespace dcbench

#endif  // DCBENCH_CORE_DATASET_H_
