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

#ifndef DCBENCH_BASELINES_BASELINES_H_
#define DCBENCH_BASELINES_BASELINES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dcbench/core/dataset.h"
#include "dcbench/core/metrics.h"
#include "dcbench/core/model.h"

// Reference participant algorithms. They only touch participant-visible
// data, so their outputs can be submitted to the arena unchanged.
namespace dcbench::baselines {

// Seeded sample without replacement. Throws kBudgetExceeded when
// budget > pool_ids.size().
std::vector<std::string> random_selection(const std::vector<std::string>& pool_ids,
                                          std::size_t budget, std::uint64_t seed);

// |p(top) - p(second)| of each row of a probability matrix.
std::vector<double> top2_margins(const ScoreMatrix& probabilities);

// The budget ids with the smallest margin, ties by ascending id. ids[i]
// belongs to margins[i]. Throws kBudgetExceeded, kLengthMismatch.
std::vector<std::string> smallest_margin(const std::vector<std::string>& ids,
                                         const std::vector<double>& margins,
                                         std::size_t budget);

// Trains the default logreg on the probe ids of pool and selects the budget
// most uncertain pool examples under it.
std::vector<std::string> uncertainty_selection(
    const Dataset& pool, const std::vector<std::string>& probe_ids,
    std::size_t budget);

// Per-example cross-entropy (logreg) or summed one-vs-rest hinge (svm)
// training loss of each labeled example under model.
std::vector<double> example_losses(const LinearModel& model, const Dataset& data);

// All examples by descending loss under a probe trained on the dirty data
// itself, ties by ascending id.
Ranking smallloss_priority(const Dataset& dirty, const LinearModel& probe);
Ranking smallloss_priority(const Dataset& dirty);

}  // namespace dcbench::baselines

#endif  // DCBENCH_BASELINES_BASELINES_H_
