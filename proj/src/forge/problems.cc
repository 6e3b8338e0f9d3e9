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

#include "dcbench/forge/problems.h"

#include "dcbench/core/error.h"

namespace dcbench::forge {

std::string_view benchmark_type_name(BenchmarkType type) {
  switch (type) {
    case BenchmarkType::kTrainingSet: return "training_set";
    case BenchmarkType::kTestSet: return "test_set";
    case BenchmarkType::kSelection: return "selection";
    case BenchmarkType::kDebugging: return "debugging";
    case BenchmarkType::kValuation: return "valuation";
    case BenchmarkType::kSlicing: return "slicing";
  }
  return "unknown";
}

BenchmarkType parse_benchmark_type(std::string_view name) {
  for (BenchmarkType t :
       {BenchmarkType::kTrainingSet, BenchmarkType::kTestSet,
        BenchmarkType::kSelection, BenchmarkType::kDebugging,
        BenchmarkType::kValuation, BenchmarkType::kSlicing}) {
    if (benchmark_type_name(t) == name) return t;
  }
  throw Error(ErrorCode::kParseError,
              "unknown benchmark type " + std::string(name));
}

BenchmarkType type_of(const Problem& problem) {
  // Variant alternatives are declared in BenchmarkType order.
  static constexpr BenchmarkType kByIndex[] = {
      BenchmarkType::kTrainingSet, BenchmarkType::kTestSet,
      BenchmarkType::kSelection,   BenchmarkType::kDebugging,
      BenchmarkType::kValuation,   BenchmarkType::kSlicing};
  return kByIndex[problem.index()];
}

Dataset apply_repairs(const Dataset& data, const HiddenRepairs& repairs,
                      const std::vector<std::string>& ids) {
  std::vector<Example> examples = data.examples();
  for (const std::string& id : ids) {
    auto i = data.find(id);
    if (!i) throw Error(ErrorCode::kUnknownExample, id);
    auto it = repairs.find(id);
    if (it == repairs.end()) continue;
    Example& e = examples[*i];
    if (it->second.label) e.label = it->second.label;
    for (const CellRepair& cell : it->second.cells) {
      e.features[cell.feature] = cell.truth;
    }
  }
  return Dataset(data.id(), data.dim(), data.classes(), std::move(examples));
}

}  // namespace dcbench::forge
