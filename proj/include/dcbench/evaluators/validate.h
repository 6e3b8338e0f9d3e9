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

#ifndef DCBENCH_EVALUATORS_VALIDATE_H_
#define DCBENCH_EVALUATORS_VALIDATE_H_

#include <optional>
#include <string>
#include <vector>

#include "dcbench/core/io.h"
#include "dcbench/evaluators/submission.h"
#include "dcbench/forge/problems.h"

namespace dcbench::eval {

// Violation codes. A report lists every violation found, not just the first.
inline constexpr const char* kBudgetExceeded = "BudgetExceeded";
inline constexpr const char* kForeignExample = "ForeignExample";
inline constexpr const char* kDuplicateExampleViolation = "DuplicateExample";
inline constexpr const char* kLabelNotAllowed = "LabelNotAllowed";
inline constexpr const char* kMissingRegenerationArtifact =
    "MissingRegenerationArtifact";
inline constexpr const char* kTaskMismatch = "TaskMismatch";
inline constexpr const char* kEmptySubmissionViolation = "EmptySubmission";
inline constexpr const char* kDimensionMismatchViolation = "DimensionMismatch";
inline constexpr const char* kNonFiniteFeature = "NonFiniteFeature";
inline constexpr const char* kTooManySlicesViolation = "TooManySlices";
inline constexpr const char* kRankingTooShortViolation = "RankingTooShort";
inline constexpr const char* kMissingEstimateViolation = "MissingEstimate";
inline constexpr const char* kEstimateOutOfRangeViolation = "EstimateOutOfRange";
inline constexpr const char* kUnknownProblem = "UnknownProblem";
inline constexpr const char* kMissingField = "MissingField";
inline constexpr const char* kMalformedPayload = "MalformedPayload";

struct Violation {
  std::string code;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
};

Json to_json(const ValidationReport& report);
ValidationReport validation_report_from_json(const Json& j);

// Checks the envelope and the payload against the problem. When
// expected_task_id is given, a different submission task_id is a
// TaskMismatch. Throws kParseError when the payload does not have the shape
// of the problem's type.
ValidationReport validate(
    const Submission& submission, const forge::Problem& problem,
    const std::optional<std::string>& expected_task_id = std::nullopt);

}  // namespace dcbench::eval

#endif  // DCBENCH_EVALUATORS_VALIDATE_H_
