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

#include "dcbench/evaluators/engine.h"

#include <filesystem>

#include "dcbench/core/hash.h"

namespace dcbench::eval {

ScoreContext context_for(const forge::Bundle& bundle, std::string submission_id) {
  ScoreContext ctx;
  ctx.submission_id = std::move(submission_id);
  ctx.problem_hash = bundle.manifest_hash;
  if (bundle.manifest.contains("concealed")) {
    ctx.concealed_hash = sha256_file(
        bundle.root / bundle.manifest.at("concealed").get<std::string>() /
        "manifest.json");
  }
  return ctx;
}

namespace {

std::vector<Ranking> to_rankings(const std::vector<std::vector<std::string>>& in) {
  std::vector<Ranking> out;
  out.reserve(in.size());
  for (const auto& ids : in) out.emplace_back(ids);
  return out;
}

std::vector<ScoreRecord> dispatch(const forge::Problem& problem,
                                  const Payload& payload,
                                  const ScoreContext& ctx) {
  return std::visit(
      [&](const auto& prob) -> std::vector<ScoreRecord> {
        using P = std::decay_t<decltype(prob)>;
        if constexpr (std::is_same_v<P, forge::TrainingSetProblem>) {
          const auto& p = std::get<TrainingSetPayload>(payload);
          const Dataset& ref = prob.hidden_test;
          return {eval_training_set(materialize(p, ref.classes(), ref.dim()), prob)};
        } else if constexpr (std::is_same_v<P, forge::TestSetProblem>) {
          const auto& p = std::get<TestSetPayload>(payload);
          ContainmentCounts counts;
          if (ctx.containment) {
            counts = *ctx.containment;
          } else {
            for (const Proposal& e : p.examples) counts[e.example_id] = 1;
          }
          ScoreRecord r = eval_test_set(p, prob, counts);
          r.provenance.suite_hash = suite_hash(prob.suite);
          return {r};
        } else if constexpr (std::is_same_v<P, forge::SelectionProblem>) {
          const auto& p = std::get<SelectionPayload>(payload);
          return eval_selection(p.selected_ids, prob, p.concealed_ids);
        } else if constexpr (std::is_same_v<P, forge::DebuggingProblem>) {
          const auto& p = std::get<DebuggingPayload>(payload);
          if (prob.headline == forge::DebugMetric::kGapClosed) {
            return {eval_debugging_gap(*p.repair_ids, prob)};
          }
          return {eval_debugging_inspection(Ranking(*p.priority), prob,
                                            prob.inspection_step)};
        } else if constexpr (std::is_same_v<P, forge::ValuationBatch>) {
          return {eval_valuation(std::get<ValuationPayload>(payload).estimates,
                                 prob)};
        } else {
          std::map<std::string, std::vector<Ranking>> rankings;
          for (const auto& [id, lists] : std::get<SlicingPayload>(payload).rankings) {
            rankings[id] = to_rankings(lists);
          }
          return {eval_slicing(rankings, prob)};
        }
      },
      problem);
}

}  // namespace

std::vector<ScoreRecord> score_submission(const forge::Problem& problem,
                                          const Submission& submission,
                                          const ScoreContext& context) {
  const Payload payload = parse_payload(forge::type_of(problem), submission.payload);
  std::vector<ScoreRecord> records = dispatch(problem, payload, context);
  for (ScoreRecord& r : records) {
    r.submission_id = context.submission_id;
    r.provenance.problem_hash =
        r.concealed ? context.concealed_hash : context.problem_hash;
    r.provenance.harness_version = kHarnessVersion;
  }
  return records;
}

}  // namespace dcbench::eval
