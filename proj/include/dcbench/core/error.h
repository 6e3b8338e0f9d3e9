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

#ifndef DCBENCH_CORE_ERROR_H_
#define DCBENCH_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcbench {

enum class ErrorCode {
  kEmptyTrainSet,
  kDimensionMismatch,
  kEmptyInput,
  kLengthMismatch,
  kNoPositiveExamples,
  kRankingTooShort,
  kEmptySlice,
  kDuplicateExample,
  kUnknownExample,
  kUnknownClass,
  kMissingFeature,
  kMissingLabel,
  kInvalidSpec,
  kRateOutOfRange,
  kCannotRealizeGap,
  kEmptySubmission,
  kBudgetExceeded,
  kDegenerateProblem,
  kMissingEstimate,
  kEstimateOutOfRange,
  kTooManySlices,
  kParseError,
  kIoError,
  kDuplicateTaskId,
  kBundleHashMismatch,
  kWindowClosed,
  kValidationFailed,
  kWrongTaskType,
  kMissingArtifact,
  kUnknownTask,
  kUnknownSubmission,
  kRateLimited,
  kNotApplicable,
  kReplayMismatch,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the whole library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dcbench

#endif  // DCBENCH_CORE_ERROR_H_
