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

#include "dcbench/core/suite.h"

#include "dcbench/core/error.h"
#include "dcbench/core/metrics.h"

namespace dcbench {

std::vector<LinearModel> train_suite(const SuiteConfig& suite,
                                     const Dataset& train_set) {
  suite.validate();
  std::vector<LinearModel> models;
  models.reserve(suite.members.size());
  for (const SuiteMember& member : suite.members) {
    models.push_back(train(member, train_set));
  }
  return models;
}

SuiteAccuracy suite_accuracy(const SuiteConfig& suite, const Dataset& train_set,
                             const Dataset& test_set) {
  suite.validate();
  const std::vector<int> truth = test_set.labels();
  SuiteAccuracy out;
  out.per_member.reserve(suite.members.size());
  for (const SuiteMember& member : suite.members) {
    const LinearModel model = train(member, train_set);
    out.per_member.push_back(accuracy(predict_labels(model, test_set), truth));
  }
  out.mean = mean_of(out.per_member);
  return out;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "mean of nothing");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace dcbench
