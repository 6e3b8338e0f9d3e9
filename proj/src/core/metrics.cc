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

#include "dcbench/core/metrics.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "dcbench/core/error.h"

namespace dcbench {

Ranking::Ranking(std::vector<std::string> ids) : ids_(std::move(ids)) {
  std::unordered_set<std::string> seen;
  seen.reserve(ids_.size());
  for (const std::string& id : ids_) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kDuplicateExample, "ranking repeats " + id);
    }
  }
}

double accuracy(std::span<const int> predictions, std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(truth.size()) + " labels");
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmptyInput, "accuracy");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predictions[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double average_precision(std::span<const double> scores,
                         std::span<const int> relevant,
                         std::span<const std::string> ids) {
  if (scores.size() != relevant.size() ||
      (!ids.empty() && ids.size() != scores.size())) {
    throw Error(ErrorCode::kLengthMismatch, "average_precision inputs");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (!ids.empty()) return ids[a] < ids[b];
    return a < b;
  });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (relevant[order[rank]] != 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0) throw Error(ErrorCode::kNoPositiveExamples, "no positives");
  return sum / static_cast<double>(hits);
}

double mean_average_precision(
    std::span<const std::vector<double>> per_class_scores,
    std::span<const std::vector<int>> per_class_truth,
    std::span<const std::string> ids) {
  if (per_class_scores.size() != per_class_truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "class count mismatch");
  }
  if (per_class_scores.empty()) throw Error(ErrorCode::kEmptyInput, "mAP");
  double total = 0.0;
  for (std::size_t c = 0; c < per_class_scores.size(); ++c) {
    try {
      total += average_precision(per_class_scores[c], per_class_truth[c], ids);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoPositiveExamples) throw;
      throw Error(ErrorCode::kNoPositiveExamples, "class " + std::to_string(c));
    }
  }
  return total / static_cast<double>(per_class_scores.size());
}

double precision_at_k(const Ranking& predicted,
                      const std::set<std::string>& slice, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidSpec, "k must be positive");
  if (slice.empty()) throw Error(ErrorCode::kEmptySlice, "empty slice");
  if (predicted.size() < k) {
    throw Error(ErrorCode::kRankingTooShort,
                "ranking of " + std::to_string(predicted.size()) +
                    " entries, k = " + std::to_string(k));
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (slice.contains(predicted[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace dcbench
