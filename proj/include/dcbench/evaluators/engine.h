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

#ifndef DCBENCH_EVALUATORS_ENGINE_H_
#define DCBENCH_EVALUATORS_ENGINE_H_

#include <optional>
#include <string>
#include <vector>

#include "dcbench/evaluators/evaluators.h"
#include "dcbench/evaluators/score_record.h"
#include "dcbench/evaluators/submission.h"
#include "dcbench/forge/bundle.h"

namespace dcbench::eval {

struct ScoreContext {
  std::string submission_id;
  std::string problem_hash;
  std::string concealed_hash;  // empty when the problem has no concealed part
  // Test-set only. Absent means the submission is the only one holding its
  // examples (count 1 each).
  std::optional<ContainmentCounts> containment;
};

// Hashes for a loaded bundle: the manifest hash, plus the nested concealed
// manifest hash for selection bundles that carry one.
ScoreContext context_for(const forge::Bundle& bundle,
                         std::string submission_id = "local");

// The single scoring path used by the CLI and the arena. Expects a
// submission that already passed validate(). The public record comes first;
// a concealed record follows when one can be computed.
std::vector<ScoreRecord> score_submission(const forge::Problem& problem,
                                          const Submission& submission,
                                          const ScoreContext& context);

}  // namespace dcbench::eval

#endif  // DCBENCH_EVALUATORS_ENGINE_H_
