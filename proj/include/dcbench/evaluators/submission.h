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

#ifndef DCBENCH_EVALUATORS_SUBMISSION_H_
#define DCBENCH_EVALUATORS_SUBMISSION_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcbench/core/io.h"
#include "dcbench/forge/problems.h"

namespace dcbench::eval {

enum class Division { kOpen, kClosed };

std::string_view division_name(Division d);
Division parse_division(std::string_view name);

struct RegenerationArtifact {
  std::string content_hash;  // hash of the code/container that made the payload
  std::string command;

  friend bool operator==(const RegenerationArtifact&,
                         const RegenerationArtifact&) = default;
};

// The JSON envelope a participant submits. The payload stays raw JSON here;
// parse_payload() interprets it against a task type.
struct Submission {
  std::string task_id;
  Division division = Division::kOpen;
  Json payload;
  std::string method_description;
  std::optional<RegenerationArtifact> regeneration_artifact;
  std::string submitter = "anonymous";
};

// Throws kParseError on a malformed envelope.
Submission parse_submission(const Json& j);
Json to_json(const Submission& s);

// SHA-256 of the payload's canonical serialization (sorted keys, no
// whitespace); what closed-division verification compares against.
std::string payload_hash(const Json& payload);

struct ProposedExample {
  std::string example_id;
  std::string label;
  std::vector<double> features;
};

struct TrainingSetPayload {
  std::vector<ProposedExample> examples;
};

struct Proposal {
  std::string example_id;
  std::string label;
};

struct TestSetPayload {
  std::vector<Proposal> examples;
};

struct SelectionPayload {
  std::vector<std::string> selected_ids;
  // Ids chosen from the concealed pool by an operator rerun of the
  // participant's algorithm.
  std::optional<std::vector<std::string>> concealed_ids;
};

struct DebuggingPayload {
  std::optional<std::vector<std::string>> repair_ids;  // fixed-budget mode
  std::optional<std::vector<std::string>> priority;    // inspection mode
};

struct ValuationPayload {
  std::map<std::string, double> estimates;
};

struct SlicingPayload {
  std::map<std::string, std::vector<std::vector<std::string>>> rankings;
};

// Alternatives follow forge::BenchmarkType order.
using Payload = std::variant<TrainingSetPayload, TestSetPayload,
                             SelectionPayload, DebuggingPayload,
                             ValuationPayload, SlicingPayload>;

// Throws kParseError when the payload shape does not match the task type.
Payload parse_payload(forge::BenchmarkType type, const Json& payload);

}  // namespace dcbench::eval

#endif  // DCBENCH_EVALUATORS_SUBMISSION_H_
