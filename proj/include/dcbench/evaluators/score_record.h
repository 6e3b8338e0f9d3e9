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

#ifndef DCBENCH_EVALUATORS_SCORE_RECORD_H_
#define DCBENCH_EVALUATORS_SCORE_RECORD_H_

#include <string>

#include "dcbench/core/io.h"

namespace dcbench::eval {

inline constexpr const char* kHarnessVersion = DCBENCH_VERSION;

struct Provenance {
  std::string problem_hash;
  std::string suite_hash;
  std::string harness_version = kHarnessVersion;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Evaluator output. `value` is always recomputable from `breakdown` by the
// aggregation named in breakdown["aggregation"].
struct ScoreRecord {
  std::string submission_id;
  std::string metric_name;
  double value = 0.0;
  Json breakdown = Json::object();
  Provenance provenance;
  bool concealed = false;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

Json to_json(const ScoreRecord& r);
ScoreRecord score_record_from_json(const Json& j);

}  // namespace dcbench::eval

#endif  // DCBENCH_EVALUATORS_SCORE_RECORD_H_
