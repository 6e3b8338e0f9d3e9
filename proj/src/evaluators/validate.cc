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

#include "dcbench/evaluators/validate.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dcbench/evaluators/evaluators.h"

namespace dcbench::eval {

namespace {

class Checker {
 public:
  void add(const char* code, std::string detail) {
    report_.violations.push_back(Violation{code, std::move(detail)});
  }

  // Reports duplicates and, when pool is given, ids that do not resolve.
  void ids(const std::vector<std::string>& ids, const Dataset* pool,
           const std::string& where) {
    std::set<std::string> seen;
    for (const std::string& id : ids) {
      if (!seen.insert(id).second) {
        add(kDuplicateExampleViolation, where + id);
      } else if (pool != nullptr && !pool->contains(id)) {
        add(kForeignExample, where + id);
      }
    }
  }

  void cap(std::size_t count, std::size_t limit, const std::string& what) {
    if (count > limit) {
      add(kBudgetExceeded, std::to_string(count) + " " + what + ", limit " +
                               std::to_string(limit));
    }
  }

  void nonempty(std::size_t count, const std::string& what) {
    if (count == 0) add(kEmptySubmissionViolation, "no " + what);
  }

  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

bool allowed(const std::vector<std::string>& labels, const std::string& label) {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

void check(Checker& c, const TrainingSetPayload& p,
           const forge::TrainingSetProblem& problem) {
  c.nonempty(p.examples.size(), "examples");
  c.cap(p.examples.size(), problem.size_cap, "examples");
  std::vector<std::string> ids;
  const Dataset& reference = problem.hidden_test;
  for (const ProposedExample& e : p.examples) {
    ids.push_back(e.example_id);
    if (!allowed(reference.classes(), e.label)) {
      c.add(kLabelNotAllowed, e.example_id + " label " + e.label);
    }
    if (static_cast<int>(e.features.size()) != reference.dim()) {
      c.add(kDimensionMismatchViolation,
            e.example_id + " has " + std::to_string(e.features.size()) +
                " features, expected " + std::to_string(reference.dim()));
    } else if (!std::all_of(e.features.begin(), e.features.end(),
                            [](double v) { return std::isfinite(v); })) {
      c.add(kNonFiniteFeature, e.example_id);
    }
  }
  c.ids(ids, nullptr, "");
}

void check(Checker& c, const TestSetPayload& p,
           const forge::TestSetProblem& problem) {
  c.nonempty(p.examples.size(), "examples");
  c.cap(p.examples.size(), problem.submission_cap, "examples");
  std::vector<std::string> ids;
  for (const Proposal& e : p.examples) {
    ids.push_back(e.example_id);
    if (!allowed(problem.allowed_labels, e.label)) {
      c.add(kLabelNotAllowed, e.example_id + " label " + e.label);
    }
  }
  c.ids(ids, &problem.candidate_pool, "");
}

void check(Checker& c, const SelectionPayload& p,
           const forge::SelectionProblem& problem) {
  c.nonempty(p.selected_ids.size(), "selected ids");
  c.cap(p.selected_ids.size(), problem.budget, "selected ids");
  c.ids(p.selected_ids, &problem.pool, "");
  if (p.concealed_ids) {
    if (!problem.concealed) {
      c.add(kTaskMismatch, "task has no concealed pool");
      return;
    }
    c.nonempty(p.concealed_ids->size(), "concealed ids");
    c.cap(p.concealed_ids->size(), problem.concealed->budget, "concealed ids");
    c.ids(*p.concealed_ids, &problem.concealed->pool, "concealed ");
  }
}

void check(Checker& c, const DebuggingPayload& p,
           const forge::DebuggingProblem& problem) {
  if (problem.headline == forge::DebugMetric::kGapClosed) {
    if (!p.repair_ids) {
      c.add(kMissingField, "repair_ids is required for gap_closed scoring");
      return;
    }
    if (!problem.budget) {
      c.add(kTaskMismatch, "task has no repair budget");
    } else {
      c.cap(p.repair_ids->size(), *problem.budget, "repair ids");
    }
    c.ids(*p.repair_ids, &problem.dirty_train, "");
  } else {
    if (!p.priority) {
      c.add(kMissingField, "priority is required for inspection scoring");
      return;
    }
    c.ids(*p.priority, &problem.dirty_train, "");
  }
}

void check(Checker& c, const ValuationPayload& p,
           const forge::ValuationBatch& batch) {
  std::set<std::string> known;
  for (const forge::ValuationProblem& problem : batch.problems) {
    known.insert(problem.problem_id);
    auto it = p.estimates.find(problem.problem_id);
    if (it == p.estimates.end()) {
      c.add(kMissingEstimateViolation, problem.problem_id);
    } else if (!(it->second >= 0.0 && it->second <= 1.0)) {
      c.add(kEstimateOutOfRangeViolation, problem.problem_id);
    }
  }
  for (const auto& [id, value] : p.estimates) {
    if (!known.contains(id)) c.add(kUnknownProblem, id);
  }
}

void check(Checker& c, const SlicingPayload& p, const forge::SliceBatch& batch) {
  std::set<std::string> known;
  for (const forge::SliceProblem& problem : batch.problems) {
    known.insert(problem.problem_id);
    auto it = p.rankings.find(problem.problem_id);
    if (it == p.rankings.end() || it->second.empty()) {
      c.add(kEmptySubmissionViolation, "no rankings for " + problem.problem_id);
      continue;
    }
    if (it->second.size() > kMaxSlices) {
      c.add(kTooManySlicesViolation,
            problem.problem_id + " has " + std::to_string(it->second.size()) +
                " rankings, limit " + std::to_string(kMaxSlices));
    }
    for (std::size_t r = 0; r < it->second.size(); ++r) {
      const auto& ranking = it->second[r];
      const std::string where =
          problem.problem_id + "[" + std::to_string(r) + "] ";
      if (ranking.size() < problem.k) {
        c.add(kRankingTooShortViolation,
              where + "has " + std::to_string(ranking.size()) + " ids, k " +
                  std::to_string(problem.k));
      }
      c.ids(ranking, &problem.dataset, where);
    }
  }
  for (const auto& [id, rankings] : p.rankings) {
    if (!known.contains(id)) c.add(kUnknownProblem, id);
  }
}

}  // namespace

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

Json to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"code", v.code}, {"detail", v.detail}});
  }
  return {{"ok", report.ok()}, {"violations", violations}};
}

ValidationReport validation_report_from_json(const Json& j) {
  ValidationReport report;
  for (const Json& v : j.at("violations")) {
    report.violations.push_back(
        Violation{v.at("code").get<std::string>(), v.at("detail").get<std::string>()});
  }
  return report;
}

ValidationReport validate(const Submission& submission,
                          const forge::Problem& problem,
                          const std::optional<std::string>& expected_task_id) {
  Checker c;
  if (expected_task_id && submission.task_id != *expected_task_id) {
    c.add(kTaskMismatch, "submission is for task " + submission.task_id +
                             ", expected " + *expected_task_id);
  }
  if (submission.division == Division::kClosed &&
      !submission.regeneration_artifact) {
    c.add(kMissingRegenerationArtifact,
          "closed division requires a regeneration artifact");
  }
  const Payload payload = parse_payload(forge::type_of(problem), submission.payload);
  std::visit(
      [&](const auto& prob) {
        using P = std::decay_t<decltype(prob)>;
        if constexpr (std::is_same_v<P, forge::TrainingSetProblem>) {
          check(c, std::get<TrainingSetPayload>(payload), prob);
        } else if constexpr (std::is_same_v<P, forge::TestSetProblem>) {
          check(c, std::get<TestSetPayload>(payload), prob);
        } else if constexpr (std::is_same_v<P, forge::SelectionProblem>) {
          check(c, std::get<SelectionPayload>(payload), prob);
        } else if constexpr (std::is_same_v<P, forge::DebuggingProblem>) {
          check(c, std::get<DebuggingPayload>(payload), prob);
        } else if constexpr (std::is_same_v<P, forge::ValuationBatch>) {
          check(c, std::get<ValuationPayload>(payload), prob);
        } else {
          check(c, std::get<SlicingPayload>(payload), prob);
        }
      },
      problem);
  return c.take();
}

}  // namespace dcbench::eval
