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

#include "dcbench/baselines/baselines.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dcbench/core/error.h"
#include "dcbench/core/random.h"

namespace dcbench::baselines {

namespace {

std::vector<std::size_t> order_by(const std::vector<double>& keys,
                                  const std::vector<std::string>& ids,
                                  bool ascending) {
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return ascending ? keys[a] < keys[b] : keys[a] > keys[b];
    return ids[a] < ids[b];
  });
  return idx;
}

}  // namespace

std::vector<std::string> random_selection(const std::vector<std::string>& pool_ids,
                                          std::size_t budget, std::uint64_t seed) {
  if (budget > pool_ids.size()) {
    throw Error(ErrorCode::kBudgetExceeded,
                "budget " + std::to_string(budget) + " exceeds pool of " +
                    std::to_string(pool_ids.size()));
  }
  Rng rng(derive_seed(seed, "random-selection"));
  std::vector<std::string> out;
  out.reserve(budget);
  for (std::size_t i : rng.sample_without_replacement(pool_ids.size(), budget)) {
    out.push_back(pool_ids[i]);
  }
  return out;
}

std::vector<double> top2_margins(const ScoreMatrix& probabilities) {
  std::vector<double> out(probabilities.rows);
  for (std::size_t i = 0; i < probabilities.rows; ++i) {
    double first = -INFINITY, second = -INFINITY;
    for (std::size_t c = 0; c < probabilities.cols; ++c) {
      const double p = probabilities.at(i, c);
      if (p > first) {
        second = first;
        first = p;
      } else if (p > second) {
        second = p;
      }
    }
    out[i] = probabilities.cols < 2 ? first : std::abs(first - second);
  }
  return out;
}

std::vector<std::string> smallest_margin(const std::vector<std::string>& ids,
                                         const std::vector<double>& margins,
                                         std::size_t budget) {
  if (ids.size() != margins.size()) {
    throw Error(ErrorCode::kLengthMismatch, "ids and margins differ in length");
  }
  if (budget > ids.size()) {
    throw Error(ErrorCode::kBudgetExceeded,
                "budget " + std::to_string(budget) + " exceeds pool of " +
                    std::to_string(ids.size()));
  }
  const std::vector<std::size_t> idx = order_by(margins, ids, true);
  std::vector<std::string> out;
  out.reserve(budget);
  for (std::size_t r = 0; r < budget; ++r) out.push_back(ids[idx[r]]);
  return out;
}

std::vector<std::string> uncertainty_selection(
    const Dataset& pool, const std::vector<std::string>& probe_ids,
    std::size_t budget) {
  const LinearModel probe =
      train(SuiteMember{ModelKind::kLogReg}, pool.subset(probe_ids));
  return smallest_margin(pool.ids(), top2_margins(softmax(predict_scores(probe, pool))),
                         budget);
}

std::vector<double> example_losses(const LinearModel& model, const Dataset& data) {
  const ScoreMatrix scores = predict_scores(model, data);
  const std::vector<int> labels = data.labels();
  std::vector<double> out(scores.rows);
  for (std::size_t i = 0; i < scores.rows; ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    if (model.kind == ModelKind::kLogReg) {
      double top = scores.at(i, 0);
      for (std::size_t c = 1; c < scores.cols; ++c) top = std::max(top, scores.at(i, c));
      double z = 0.0;
      for (std::size_t c = 0; c < scores.cols; ++c) z += std::exp(scores.at(i, c) - top);
      out[i] = top + std::log(z) - scores.at(i, y);
    } else {
      double loss = 0.0;
      for (std::size_t c = 0; c < scores.cols; ++c) {
        const double sign = c == y ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - sign * scores.at(i, c));
      }
      out[i] = loss;
    }
  }
  return out;
}

Ranking smallloss_priority(const Dataset& dirty, const LinearModel& probe) {
  const std::vector<std::string> ids = dirty.ids();
  const std::vector<std::size_t> idx = order_by(example_losses(probe, dirty), ids, false);
  std::vector<std::string> ranked;
  ranked.reserve(idx.size());
  for (std::size_t i : idx) ranked.push_back(ids[i]);
  return Ranking(std::move(ranked));
}

Ranking smallloss_priority(const Dataset& dirty) {
  return smallloss_priority(dirty, train(SuiteMember{ModelKind::kLogReg}, dirty));
}

}  // namespace dcbench::baselines
