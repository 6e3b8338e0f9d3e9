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

#include "dcbench/core/error.h"

namespace dcbench {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoPositiveExamples: return "NoPositiveExamples";
    case ErrorCode::kRankingTooShort: return "RankingTooShort";
    case ErrorCode::kEmptySlice: return "EmptySlice";
    case ErrorCode::kDuplicateExample: return "DuplicateExample";
    case ErrorCode::kUnknownExample: return "UnknownExample";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kMissingLabel: return "MissingLabel";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kRateOutOfRange: return "RateOutOfRange";
    case ErrorCode::kCannotRealizeGap: return "CannotRealizeGap";
    case ErrorCode::kEmptySubmission: return "EmptySubmission";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kDegenerateProblem: return "DegenerateProblem";
    case ErrorCode::kMissingEstimate: return "MissingEstimate";
    case ErrorCode::kEstimateOutOfRange: return "EstimateOutOfRange";
    case ErrorCode::kTooManySlices: return "TooManySlices";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDuplicateTaskId: return "DuplicateTaskId";
    case ErrorCode::kBundleHashMismatch: return "BundleHashMismatch";
    case ErrorCode::kWindowClosed: return "WindowClosed";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kWrongTaskType: return "WrongTaskType";
    case ErrorCode::kMissingArtifact: return "MissingArtifact";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kUnknownSubmission: return "UnknownSubmission";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kReplayMismatch: return "ReplayMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace dcbench
