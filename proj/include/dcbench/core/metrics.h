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

#ifndef DCBENCH_CORE_METRICS_H_
#define DCBENCH_CORE_METRICS_H_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dcbench {

// Ordered example ids, highest priority first. Duplicates are rejected at
// construction (kDuplicateExample); resolution against a candidate pool is
// the caller's job.
class Ranking {
 public:
  Ranking() = default;
  explicit Ranking(std::vector<std::string> ids);

  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::string& operator[](std::size_t i) const { return ids_[i]; }

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<std::string> ids_;
};

// count(equal) / n. Throws kEmptyInput, kLengthMismatch.
double accuracy(std::span<const int> predictions, std::span<const int> truth);

// Non-interpolated average precision: the mean, over relevant items, of the
// precision at that item's rank. Ranks are by descending score; equal scores
// are ordered by ascending id (by position when ids is empty).
// Throws kNoPositiveExamples, kLengthMismatch.
double average_precision(std::span<const double> scores,
                         std::span<const int> relevant,
                         std::span<const std::string> ids = {});

// Unweighted mean of per-class AP. per_class_scores[c][i] is the score of
// example i for class c; per_class_truth[c][i] is 1 when i is a positive.
double mean_average_precision(
    std::span<const std::vector<double>> per_class_scores,
    std::span<const std::vector<int>> per_class_truth,
    std::span<const std::string> ids = {});

// |top-k(predicted) intersect slice| / k.
// Throws kRankingTooShort, kEmptySlice, kInvalidSpec (k == 0).
double precision_at_k(const Ranking& predicted,
                      const std::set<std::string>& slice, std::size_t k);

}  // namespace dcbench

#endif  // DCBENCH_CORE_METRICS_H_
