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

#include "dcbench/evaluators/score_record.h"

#include "dcbench/core/error.h"

namespace dcbench::eval {

Json to_json(const ScoreRecord& r) {
  return {{"submission_id", r.submission_id},
          {"metric_name", r.metric_name},
          {"value", r.value},
          {"breakdown", r.breakdown},
          {"provenance",
           {{"problem_hash", r.provenance.problem_hash},
            {"suite_hash", r.provenance.suite_hash},
            {"harness_version", r.provenance.harness_version}}},
          {"concealed", r.concealed}};
}

ScoreRecord score_record_from_json(const Json& j) {
  try {
    ScoreRecord r;
    r.submission_id = j.at("submission_id").get<std::string>();
    r.metric_name = j.at("metric_name").get<std::string>();
    r.value = j.at("value").get<double>();
    r.breakdown = j.at("breakdown");
    const Json& p = j.at("provenance");
    r.provenance.problem_hash = p.at("problem_hash").get<std::string>();
    r.provenance.suite_hash = p.at("suite_hash").get<std::string>();
    r.provenance.harness_version = p.at("harness_version").get<std::string>();
    r.concealed = j.at("concealed").get<bool>();
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("score record: ") + e.what());
  }
}

}  // namespace dcbench::eval
