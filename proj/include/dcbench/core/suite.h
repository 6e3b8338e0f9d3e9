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

#ifndef DCBENCH_CORE_SUITE_H_
#define DCBENCH_CORE_SUITE_H_

#include <span>
#include <vector>

#include "dcbench/core/dataset.h"
#include "dcbench/core/model.h"

namespace dcbench {

std::vector<LinearModel> train_suite(const SuiteConfig& suite,
                                     const Dataset& train_set);

// Per-member hidden-test accuracies plus their unweighted mean.
struct SuiteAccuracy {
  std::vector<double> per_member;
  double mean = 0.0;
};

SuiteAccuracy suite_accuracy(const SuiteConfig& suite, const Dataset& train_set,
                             const Dataset& test_set);

double mean_of(std::span<const double> values);

}  // namespace dcbench

#endif  // DCBENCH_CORE_SUITE_H_
