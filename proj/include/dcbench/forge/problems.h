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

#ifndef DCBENCH_FORGE_PROBLEMS_H_
#define DCBENCH_FORGE_PROBLEMS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcbench/core/dataset.h"
#include "dcbench/core/model.h"

namespace dcbench::forge {

enum class BenchmarkType {
  kTrainingSet,
  kTestSet,
  kSelection,
  kDebugging,
  kValuation,
  kSlicing,
};

std::string_view benchmark_type_name(BenchmarkType type);
BenchmarkType parse_benchmark_type(std::string_view name);

// A NULLed feature cell: the hidden truth plus the three published
// candidates, one of which equals the truth.
struct CellRepair {
  int feature = 0;
  double truth = 0.0;
  std::array<double, 3> candidates{};
  int true_index = 0;

  friend bool operator==(const CellRepair&, const CellRepair&) = default;
};

struct Repair {
  std::optional<int> label;  // original label when it was corrupted
  std::vector<CellRepair> cells;

  friend bool operator==(const Repair&, const Repair&) = default;
};

using HiddenRepairs = std::map<std::string, Repair>;

struct TrainingSetProblem {
  Dataset reference_train;  // published, possibly noisy
  Dataset clean_train;      // hidden
  Dataset validation;
  Dataset hidden_test;
  SuiteConfig suite;
  std::size_t size_cap = 0;
  double clean_baseline = 0.0;      // suite accuracy of clean_train
  double reference_baseline = 0.0;  // suite accuracy of reference_train
};

enum class SelectionMetric { kAccuracy, kMeanAveragePrecision };

struct SelectionProblem {
  Dataset pool;
  std::vector<std::string> probe_ids;  // labeled probe split inside the pool
  Dataset hidden_test;
  SuiteConfig suite;
  std::size_t budget = 0;
  SelectionMetric metric = SelectionMetric::kAccuracy;
  // Second pool used only to score generalization; never published.
  std::shared_ptr<const SelectionProblem> concealed;
};

struct TestSetProblem {
  Dataset candidate_pool;  // with hidden truth labels
  std::vector<std::string> allowed_labels;
  SuiteConfig suite;
  std::vector<LinearModel> frozen_models;
  std::size_t submission_cap = 0;
};

enum class DebugMetric { kGapClosed, kInspectionFraction };

struct DebuggingProblem {
  Dataset dirty_train;
  HiddenRepairs hidden_repairs;
  Dataset validation;
  Dataset hidden_test;
  std::optional<std::size_t> budget;
  SuiteConfig suite;
  DebugMetric headline = DebugMetric::kGapClosed;
  std::size_t inspection_step = 10;
};

struct ValuationProblem {
  std::string problem_id;
  Dataset d_a;
  Dataset d_b;  // with truth labels; participants see d_b.without_labels()
  Dataset d_test;
  SuiteConfig suite;
  double true_union_accuracy = 0.0;
};

struct ValuationBatch {
  std::vector<ValuationProblem> problems;
};

struct SliceProblem {
  std::string problem_id;
  Dataset dataset;
  LinearModel trained_model;
  std::vector<std::set<std::string>> ground_truth_slices;
  std::size_t k = 10;
  double overall_accuracy = 0.0;
  std::vector<double> slice_accuracies;
  double underperformance_gap = 0.0;  // overall - worst slice accuracy
  std::uint64_t final_seed = 0;
};

struct SliceBatch {
  std::vector<SliceProblem> problems;
};

using Problem = std::variant<TrainingSetProblem, TestSetProblem,
                             SelectionProblem, DebuggingProblem,
                             ValuationBatch, SliceBatch>;

BenchmarkType type_of(const Problem& problem);

// Applies the listed repairs (restoring labels and NULLed cells to truth).
// Throws kUnknownExample when an id is not in data.
Dataset apply_repairs(const Dataset& data, const HiddenRepairs& repairs,
                      const std::vector<std::string>& ids);

}  // namespace dcbench::forge

#endif  // DCBENCH_FORGE_PROBLEMS_H_
