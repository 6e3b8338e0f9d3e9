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

#include "dcbench/evaluators/submission.h"

#include "dcbench/core/error.h"
#include "dcbench/core/hash.h"

namespace dcbench::eval {

std::string_view division_name(Division d) {
  return d == Division::kOpen ? "open" : "closed";
}

Division parse_division(std::string_view name) {
  if (name == "open") return Division::kOpen;
  if (name == "closed") return Division::kClosed;
  throw Error(ErrorCode::kParseError, "unknown division " + std::string(name));
}

Submission parse_submission(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "submission must be an object");
  try {
    Submission s;
    s.task_id = j.at("task_id").get<std::string>();
    s.division = parse_division(j.at("division").get<std::string>());
    s.payload = j.at("payload");
    s.method_description = j.value("method_description", std::string());
    s.submitter = j.value("submitter", std::string("anonymous"));
    if (j.contains("regeneration_artifact") &&
        !j.at("regeneration_artifact").is_null()) {
      const Json& a = j.at("regeneration_artifact");
      s.regeneration_artifact = RegenerationArtifact{
          a.at("content_hash").get<std::string>(),
          a.at("command").get<std::string>()};
    }
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("submission: ") + e.what());
  }
}

Json to_json(const Submission& s) {
  Json j = {{"task_id", s.task_id},
            {"division", division_name(s.division)},
            {"payload", s.payload},
            {"method_description", s.method_description},
            {"submitter", s.submitter}};
  if (s.regeneration_artifact) {
    j["regeneration_artifact"] = {
        {"content_hash", s.regeneration_artifact->content_hash},
        {"command", s.regeneration_artifact->command}};
  }
  return j;
}

std::string payload_hash(const Json& payload) {
  return sha256_hex(payload.dump());
}

namespace {

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kParseError, std::string(what) + " must be an array");
  }
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const Json& v : j) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kParseError,
                  std::string(what) + " entries must be strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

const Json& field(const Json& payload, const char* name) {
  if (!payload.is_object() || !payload.contains(name)) {
    throw Error(ErrorCode::kParseError,
                std::string("payload missing '") + name + "'");
  }
  return payload.at(name);
}

}  // namespace

Payload parse_payload(forge::BenchmarkType type, const Json& payload) {
  using forge::BenchmarkType;
  try {
    switch (type) {
      case BenchmarkType::kTrainingSet: {
        TrainingSetPayload p;
        for (const Json& e : field(payload, "examples")) {
          p.examples.push_back(ProposedExample{
              e.at("example_id").get<std::string>(),
              e.at("label").get<std::string>(),
              e.at("features").get<std::vector<double>>()});
        }
        return p;
      }
      case BenchmarkType::kTestSet: {
        TestSetPayload p;
        for (const Json& e : field(payload, "examples")) {
          p.examples.push_back(Proposal{e.at("example_id").get<std::string>(),
                                        e.at("label").get<std::string>()});
        }
        return p;
      }
      case BenchmarkType::kSelection: {
        SelectionPayload p;
        p.selected_ids = string_list(field(payload, "selected_ids"), "selected_ids");
        if (payload.contains("concealed_ids") &&
            !payload.at("concealed_ids").is_null()) {
          p.concealed_ids = string_list(payload.at("concealed_ids"), "concealed_ids");
        }
        return p;
      }
      case BenchmarkType::kDebugging: {
        DebuggingPayload p;
        if (payload.is_object() && payload.contains("repair_ids")) {
          p.repair_ids = string_list(payload.at("repair_ids"), "repair_ids");
        }
        if (payload.is_object() && payload.contains("priority")) {
          p.priority = string_list(payload.at("priority"), "priority");
        }
        if (!p.repair_ids && !p.priority) {
          throw Error(ErrorCode::kParseError,
                      "debugging payload needs repair_ids or priority");
        }
        return p;
      }
      case BenchmarkType::kValuation: {
        ValuationPayload p;
        const Json& est = field(payload, "estimates");
        if (!est.is_object()) {
          throw Error(ErrorCode::kParseError, "estimates must be an object");
        }
        for (const auto& [id, v] : est.items()) {
          if (!v.is_number()) {
            throw Error(ErrorCode::kParseError, "estimate for " + id + " is not a number");
          }
          p.estimates[id] = v.get<double>();
        }
        return p;
      }
      case BenchmarkType::kSlicing: {
        SlicingPayload p;
        const Json& r = field(payload, "rankings");
        if (!r.is_object()) {
          throw Error(ErrorCode::kParseError, "rankings must be an object");
        }
        for (const auto& [id, lists] : r.items()) {
          if (!lists.is_array()) {
            throw Error(ErrorCode::kParseError, "rankings for " + id + " must be an array");
          }
          auto& out = p.rankings[id];
          for (const Json& list : lists) out.push_back(string_list(list, "ranking"));
        }
        return p;
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("payload: ") + e.what());
  }
  throw Error(ErrorCode::kParseError, "unhandled task type");
}

}  // namespace dcbench::eval
