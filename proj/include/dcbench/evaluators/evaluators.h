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

#ifndef DCBENCH_EVALUATORS_EVALUATORS_H_
#define DCBENCH_EVALUATORS_EVALUATORS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcbench/core/dataset.h"
#include "dcbench/core/metrics.h"
#include "dcbench/core/model.h"
#include "dcbench/evaluators/score_record.h"
#include "dcbench/evaluators/submission.h"
#include "dcbench/forge/problems.h"

namespace dcbench::eval {

// Trains every suite member on train_set and scores it on test_set with the
// named metric ("accuracy" or "mean_average_precision"); value is the
// unweighted mean across members. Shared by the training-set and selection
// evaluators.
ScoreRecord score_with_suite(const SuiteConfig& suite, const Dataset& train_set,
                             const Dataset& test_set, const std::string& metric);

// Builds the submitted dataset against the problem's classes and dim.
// Throws kEmptySubmission, kDimensionMismatch, kUnknownClass,
// kDuplicateExample.
Dataset materialize(const TrainingSetPayload& payload,
                    const std::vector<std::string>& classes, int dim);

ScoreRecord eval_training_set(const Dataset& submitted,
                              const forge::TrainingSetProblem& problem);

// Credit for one proposed example before dilution: the fraction of frozen
// models that mispredict the hidden label, or 0 when the proposed label is
// not the hidden one.
struct TestSetOracle {
  explicit TestSetOracle(const forge::TestSetProblem& problem);

  double failure_fraction(const std::string& example_id) const;
  // Number of frozen models that mispredict the hidden label.
  int failures(const std::string& example_id) const;
  int num_models() const { return static_cast<int>(problem_->frozen_models.size()); }
  bool human_ok(const std::string& example_id, const std::string& label) const;
  double undiluted_credit(const std::string& example_id,
                          const std::string& label) const;

 private:
  const forge::TestSetProblem* problem_;
  std::map<std::string, int> failures_;
};

using ContainmentCounts = std::map<std::string, int>;

ScoreRecord eval_test_set(const TestSetPayload& submission,
                          const forge::TestSetProblem& problem,
                          const ContainmentCounts& containment);
ScoreRecord eval_test_set(const TestSetPayload& submission,
                          const TestSetOracle& oracle,
                          const ContainmentCounts& containment);

// First record is the public score; a second, concealed record follows when
// the problem has a concealed counterpart and concealed ids are supplied.
std::vector<ScoreRecord> eval_selection(
    const std::vector<std::string>& selected_ids,
    const forge::SelectionProblem& problem,
    const std::optional<std::vector<std::string>>& concealed_ids = std::nullopt);

// Raw (perf_alg - perf_err) / (perf_rep - perf_err). Throws
// kDegenerateProblem when |perf_rep - perf_err| < 1e-9.
double gap_closed(double perf_err, double perf_rep, double perf_alg);
// Display clamp to [-1, 2].
double clamp_gap(double raw);

ScoreRecord eval_debugging_gap(const std::vector<std::string>& repair_ids,
                               const forge::DebuggingProblem& problem);

ScoreRecord eval_debugging_inspection(const Ranking& priority,
                                      const forge::DebuggingProblem& problem,
                                      std::size_t step);

ScoreRecord eval_valuation(const std::map<std::string, double>& estimates,
                           const forge::ValuationBatch& batch);

inline constexpr std::size_t kMaxSlices = 5;

ScoreRecord eval_slicing(
    const std::map<std::string, std::vector<Ranking>>& predicted,
    const forge::SliceBatch& batch);

// Applies the listed repairs from hidden truth, then fills every remaining
// NULL with the mean of that feature's observed values (0 when none are
// observed). The result has no NULLs. Throws kUnknownExample.
Dataset repair_and_impute(const Dataset& data,
                          const forge::HiddenRepairs& repairs,
                          const std::vector<std::string>& ids);

}  // namespace dcbench::eval

#endif  // DCBENCH_EVALUATORS_EVALUATORS_H_
