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

#include "dcbench/evaluators/evaluators.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "dcbench/core/error.h"
#include "dcbench/core/suite.h"

namespace dcbench::eval {

namespace {

double member_score(const LinearModel& model, const Dataset& test_set,
                    const std::string& metric) {
  const ScoreMatrix scores = predict_scores(model, test_set);
  const std::vector<int> truth = test_set.labels();
  if (metric == "accuracy") return accuracy(predict_labels(scores), truth);
  if (metric == "mean_average_precision") {
    const auto num_classes = static_cast<std::size_t>(model.num_classes);
    std::vector<std::vector<double>> per_class(num_classes,
                                               std::vector<double>(scores.rows));
    std::vector<std::vector<int>> relevant(num_classes,
                                           std::vector<int>(scores.rows, 0));
    for (std::size_t i = 0; i < scores.rows; ++i) {
      for (std::size_t c = 0; c < num_classes; ++c) {
        per_class[c][i] = scores.at(i, c);
      }
      relevant[static_cast<std::size_t>(truth[i])][i] = 1;
    }
    const std::vector<std::string> ids = test_set.ids();
    return mean_average_precision(per_class, relevant, ids);
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown suite metric " + metric);
}

void require_unique(const std::vector<std::string>& ids) {
  std::unordered_set<std::string> seen;
  for (const std::string& id : ids) {
    if (!seen.insert(id).second) throw Error(ErrorCode::kDuplicateExample, id);
  }
}

}  // namespace

ScoreRecord score_with_suite(const SuiteConfig& suite, const Dataset& train_set,
                             const Dataset& test_set, const std::string& metric) {
  if (train_set.empty()) {
    throw Error(ErrorCode::kEmptySubmission, "no training examples");
  }
  if (train_set.dim() != test_set.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "submitted dim " + std::to_string(train_set.dim()) +
                    " vs problem dim " + std::to_string(test_set.dim()));
  }
  suite.validate();
  ScoreRecord r;
  r.metric_name = metric;
  r.provenance.suite_hash = suite_hash(suite);
  Json members = Json::array();
  std::vector<double> values;
  for (std::size_t m = 0; m < suite.members.size(); ++m) {
    const SuiteMember& member = suite.members[m];
    const double v = member_score(train(member, train_set), test_set, metric);
    values.push_back(v);
    members.push_back({{"index", m},
                       {"kind", model_kind_name(member.kind)},
                       {"member_hash", member_hash(member)},
                       {metric, v}});
  }
  r.value = mean_of(values);
  r.breakdown = {{"members", members},
                 {"aggregation", "mean"},
                 {"num_train_examples", train_set.size()}};
  return r;
}

Dataset materialize(const TrainingSetPayload& payload,
                    const std::vector<std::string>& classes, int dim) {
  if (payload.examples.empty()) {
    throw Error(ErrorCode::kEmptySubmission, "training set has no examples");
  }
  std::vector<Example> examples;
  examples.reserve(payload.examples.size());
  for (const ProposedExample& p : payload.examples) {
    auto it = std::find(classes.begin(), classes.end(), p.label);
    if (it == classes.end()) throw Error(ErrorCode::kUnknownClass, p.label);
    if (static_cast<int>(p.features.size()) != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "example " + p.example_id);
    }
    for (double v : p.features) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kMissingFeature, p.example_id);
    }
    examples.push_back(Example{p.example_id, p.features,
                               static_cast<int>(it - classes.begin())});
  }
  return Dataset("submitted", dim, classes, std::move(examples));
}

ScoreRecord eval_training_set(const Dataset& submitted,
                              const forge::TrainingSetProblem& problem) {
  if (submitted.empty()) {
    throw Error(ErrorCode::kEmptySubmission, "training set has no examples");
  }
  if (submitted.dim() != problem.hidden_test.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "submitted training set");
  }
  return score_with_suite(problem.suite, submitted, problem.hidden_test,
                          "accuracy");
}

TestSetOracle::TestSetOracle(const forge::TestSetProblem& problem)
    : problem_(&problem) {
  const Dataset& pool = problem.candidate_pool;
  const std::vector<int> truth = pool.labels();
  std::vector<int> failures(pool.size(), 0);
  for (const LinearModel& model : problem.frozen_models) {
    const std::vector<int> pred = predict_labels(model, pool);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pred[i] != truth[i]) ++failures[i];
    }
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    failures_[pool[i].id] = failures[i];
  }
}

int TestSetOracle::failures(const std::string& example_id) const {
  auto it = failures_.find(example_id);
  if (it == failures_.end()) throw Error(ErrorCode::kUnknownExample, example_id);
  return it->second;
}

double TestSetOracle::failure_fraction(const std::string& example_id) const {
  const int f = failures(example_id);
  return num_models() > 0 ? static_cast<double>(f) / num_models() : 0.0;
}

bool TestSetOracle::human_ok(const std::string& example_id,
                             const std::string& label) const {
  const Dataset& pool = problem_->candidate_pool;
  auto i = pool.find(example_id);
  if (!i) throw Error(ErrorCode::kUnknownExample, example_id);
  return pool.classes()[*pool[*i].label] == label;
}

double TestSetOracle::undiluted_credit(const std::string& example_id,
                                       const std::string& label) const {
  return human_ok(example_id, label) ? failure_fraction(example_id) : 0.0;
}

ScoreRecord eval_test_set(const TestSetPayload& submission,
                          const forge::TestSetProblem& problem,
                          const ContainmentCounts& containment) {
  return eval_test_set(submission, TestSetOracle(problem), containment);
}

ScoreRecord eval_test_set(const TestSetPayload& submission,
                          const TestSetOracle& oracle,
                          const ContainmentCounts& containment) {
  std::vector<Proposal> proposals = submission.examples;
  std::sort(proposals.begin(), proposals.end(),
            [](const Proposal& a, const Proposal& b) {
              return a.example_id < b.example_id;
            });
  ScoreRecord r;
  r.metric_name = "adversarial_credit";
  Json examples = Json::array();
  double total = 0.0;
  for (const Proposal& p : proposals) {
    const int failed = oracle.failures(p.example_id);
    const double failure = oracle.failure_fraction(p.example_id);
    const bool ok = oracle.human_ok(p.example_id, p.label);
    auto it = containment.find(p.example_id);
    const int count = it == containment.end() ? 0 : it->second;
    if (count < 1) {
      throw Error(ErrorCode::kInvalidSpec,
                  "containment count for " + p.example_id + " must be >= 1");
    }
    // One rounding of the exact rational failed / (models * count), so the
    // credits of every holder of an example are equal and reproducible.
    const int models = oracle.num_models();
    const double credit =
        ok && failed > 0
            ? static_cast<double>(failed) / (static_cast<double>(models) * count)
            : 0.0;
    total += credit;
    examples.push_back({{"example_id", p.example_id},
                        {"proposed_label", p.label},
                        {"failure_fraction", failure},
                        {"human_ok", ok},
                        {"model_failures", failed},
                        {"num_models", models},
                        {"containment", count},
                        {"credit", credit}});
  }
  r.value = total;
  r.breakdown = {{"examples", examples}, {"aggregation", "sum"}};
  return r;
}

std::vector<ScoreRecord> eval_selection(
    const std::vector<std::string>& selected_ids,
    const forge::SelectionProblem& problem,
    const std::optional<std::vector<std::string>>& concealed_ids) {
  auto score = [](const std::vector<std::string>& ids,
                  const forge::SelectionProblem& p) {
    if (ids.size() > p.budget) {
      throw Error(ErrorCode::kBudgetExceeded,
                  std::to_string(ids.size()) + " selected, budget " +
                      std::to_string(p.budget));
    }
    require_unique(ids);
    if (ids.empty()) throw Error(ErrorCode::kEmptySubmission, "nothing selected");
    const Dataset subset = p.pool.subset(ids);
    const std::string metric = p.metric == forge::SelectionMetric::kAccuracy
                                   ? "accuracy"
                                   : "mean_average_precision";
    ScoreRecord r = score_with_suite(p.suite, subset, p.hidden_test, metric);
    r.breakdown["budget"] = p.budget;
    return r;
  };
  std::vector<ScoreRecord> out;
  out.push_back(score(selected_ids, problem));
  if (problem.concealed && concealed_ids) {
    ScoreRecord concealed = score(*concealed_ids, *problem.concealed);
    concealed.concealed = true;
    out.push_back(std::move(concealed));
  }
  return out;
}

double gap_closed(double perf_err, double perf_rep, double perf_alg) {
  const double denom = perf_rep - perf_err;
  if (std::abs(denom) < 1e-9) {
    throw Error(ErrorCode::kDegenerateProblem,
                "repaired and erroneous accuracies coincide");
  }
  return (perf_alg - perf_err) / denom;
}

double clamp_gap(double raw) { return std::clamp(raw, -1.0, 2.0); }

namespace {

std::vector<std::string> all_repair_ids(const forge::HiddenRepairs& repairs) {
  std::vector<std::string> ids;
  ids.reserve(repairs.size());
  for (const auto& [id, r] : repairs) ids.push_back(id);
  return ids;
}

SuiteAccuracy debug_accuracy(const forge::DebuggingProblem& problem,
                             const std::vector<std::string>& repaired) {
  return suite_accuracy(
      problem.suite,
      repair_and_impute(problem.dirty_train, problem.hidden_repairs, repaired),
      problem.hidden_test);
}

}  // namespace

ScoreRecord eval_debugging_gap(const std::vector<std::string>& repair_ids,
                               const forge::DebuggingProblem& problem) {
  if (!problem.budget) {
    throw Error(ErrorCode::kInvalidSpec, "problem has no repair budget");
  }
  if (repair_ids.size() > *problem.budget) {
    throw Error(ErrorCode::kBudgetExceeded,
                std::to_string(repair_ids.size()) + " repairs, budget " +
                    std::to_string(*problem.budget));
  }
  require_unique(repair_ids);
  for (const std::string& id : repair_ids) {
    if (!problem.dirty_train.contains(id)) {
      throw Error(ErrorCode::kUnknownExample, id);
    }
  }
  const SuiteAccuracy err = debug_accuracy(problem, {});
  const SuiteAccuracy rep =
      debug_accuracy(problem, all_repair_ids(problem.hidden_repairs));
  const SuiteAccuracy alg = debug_accuracy(problem, repair_ids);
  const double raw = gap_closed(err.mean, rep.mean, alg.mean);

  std::size_t effective = 0;
  for (const std::string& id : repair_ids) {
    if (problem.hidden_repairs.contains(id)) ++effective;
  }
  ScoreRecord r;
  r.metric_name = "gap_closed";
  r.value = clamp_gap(raw);
  r.provenance.suite_hash = suite_hash(problem.suite);
  r.breakdown = {{"perf_err", err.mean},
                 {"perf_rep", rep.mean},
                 {"perf_alg", alg.mean},
                 {"perf_err_members", err.per_member},
                 {"perf_rep_members", rep.per_member},
                 {"perf_alg_members", alg.per_member},
                 {"raw_gap", raw},
                 {"aggregation", "clamp((perf_alg-perf_err)/(perf_rep-perf_err),-1,2)"},
                 {"num_repaired", repair_ids.size()},
                 {"num_corrupted_repaired", effective},
                 {"budget", *problem.budget}};
  return r;
}

ScoreRecord eval_debugging_inspection(const Ranking& priority,
                                      const forge::DebuggingProblem& problem,
                                      std::size_t step) {
  if (step == 0) throw Error(ErrorCode::kInvalidSpec, "step must be >= 1");
  const Dataset& dirty = problem.dirty_train;
  const std::size_t n = dirty.size();

  std::vector<std::string> order;
  order.reserve(n);
  std::set<std::string> listed;
  for (const std::string& id : priority.ids()) {
    if (!dirty.contains(id)) throw Error(ErrorCode::kUnknownExample, id);
    order.push_back(id);
    listed.insert(id);
  }
  for (const Example& e : dirty.examples()) {  // canonical = ascending id
    if (!listed.contains(e.id)) order.push_back(e.id);
  }

  const SuiteAccuracy clean =
      debug_accuracy(problem, all_repair_ids(problem.hidden_repairs));
  const double threshold = 0.95 * clean.mean;

  // Training is a pure function of the dataset, so a block that repairs
  // nothing leaves the previous accuracy valid without retraining.
  std::vector<std::string> inspected;
  inspected.reserve(n);
  double current = debug_accuracy(problem, {}).mean;
  const double initial = current;
  Json trace = Json::array();
  trace.push_back({{"inspected", 0}, {"accuracy", current}});
  std::size_t retrains = 1;
  while (current < threshold && inspected.size() < n) {
    const std::size_t block = std::min(step, n - inspected.size());
    bool changed = false;
    for (std::size_t b = 0; b < block; ++b) {
      const std::string& id = order[inspected.size()];
      if (problem.hidden_repairs.contains(id)) changed = true;
      inspected.push_back(id);
    }
    if (changed) {
      current = debug_accuracy(problem, inspected).mean;
      ++retrains;
      trace.push_back({{"inspected", inspected.size()}, {"accuracy", current}});
    }
  }

  ScoreRecord r;
  r.metric_name = "inspection_fraction";
  r.value = static_cast<double>(inspected.size()) / static_cast<double>(n);
  r.provenance.suite_hash = suite_hash(problem.suite);
  r.breakdown = {{"inspections", inspected.size()},
                 {"n", n},
                 {"step", step},
                 {"clean_accuracy", clean.mean},
                 {"threshold", threshold},
                 {"initial_accuracy", initial},
                 {"final_accuracy", current},
                 {"retrains", retrains},
                 {"trace", trace},
                 {"aggregation", "inspections/n"}};
  return r;
}

ScoreRecord eval_valuation(const std::map<std::string, double>& estimates,
                           const forge::ValuationBatch& batch) {
  if (batch.problems.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "empty valuation batch");
  }
  std::vector<const forge::ValuationProblem*> problems;
  for (const auto& p : batch.problems) problems.push_back(&p);
  std::sort(problems.begin(), problems.end(),
            [](const auto* a, const auto* b) { return a->problem_id < b->problem_id; });

  ScoreRecord r;
  r.metric_name = "rmse";
  r.provenance.suite_hash = suite_hash(batch.problems.front().suite);
  Json per_problem = Json::array();
  double sum_sq = 0.0;
  for (const auto* p : problems) {
    auto it = estimates.find(p->problem_id);
    if (it == estimates.end()) {
      throw Error(ErrorCode::kMissingEstimate, p->problem_id);
    }
    const double estimate = it->second;
    if (!(estimate >= 0.0 && estimate <= 1.0)) {
      throw Error(ErrorCode::kEstimateOutOfRange,
                  p->problem_id + " estimate " + std::to_string(estimate));
    }
    const double error = std::abs(estimate - p->true_union_accuracy);
    sum_sq += error * error;
    per_problem.push_back({{"problem_id", p->problem_id},
                           {"estimate", estimate},
                           {"true_accuracy", p->true_union_accuracy},
                           {"abs_error", error}});
  }
  r.value = std::sqrt(sum_sq / static_cast<double>(problems.size()));
  r.breakdown = {{"problems", per_problem},
                 {"aggregation", "sqrt(mean(abs_error^2))"}};
  return r;
}

ScoreRecord eval_slicing(
    const std::map<std::string, std::vector<Ranking>>& predicted,
    const forge::SliceBatch& batch) {
  if (batch.problems.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "empty slicing batch");
  }
  std::vector<const forge::SliceProblem*> problems;
  for (const auto& p : batch.problems) problems.push_back(&p);
  std::sort(problems.begin(), problems.end(),
            [](const auto* a, const auto* b) { return a->problem_id < b->problem_id; });

  ScoreRecord r;
  r.metric_name = "mean_max_precision_at_k";
  Json per_problem = Json::array();
  double total = 0.0;
  for (const auto* p : problems) {
    auto it = predicted.find(p->problem_id);
    if (it == predicted.end() || it->second.empty()) {
      throw Error(ErrorCode::kEmptySubmission,
                  "no predicted slices for " + p->problem_id);
    }
    const std::vector<Ranking>& rankings = it->second;
    if (rankings.size() > kMaxSlices) {
      throw Error(ErrorCode::kTooManySlices,
                  p->problem_id + " has " + std::to_string(rankings.size()));
    }
    double best = 0.0;
    std::size_t best_ranking = 0, best_slice = 0;
    Json values = Json::array();
    for (std::size_t ri = 0; ri < rankings.size(); ++ri) {
      for (const std::string& id : rankings[ri].ids()) {
        if (!p->dataset.contains(id)) throw Error(ErrorCode::kUnknownExample, id);
      }
      Json row = Json::array();
      for (std::size_t si = 0; si < p->ground_truth_slices.size(); ++si) {
        const double v =
            precision_at_k(rankings[ri], p->ground_truth_slices[si], p->k);
        row.push_back(v);
        if (v > best) {
          best = v;
          best_ranking = ri;
          best_slice = si;
        }
      }
      values.push_back(row);
    }
    total += best;
    per_problem.push_back({{"problem_id", p->problem_id},
                           {"k", p->k},
                           {"max_precision_at_k", best},
                           {"best_ranking", best_ranking},
                           {"best_slice", best_slice},
                           {"precision_at_k", values}});
  }
  r.value = total / static_cast<double>(problems.size());
  r.breakdown = {{"problems", per_problem},
                 {"aggregation", "mean(max_precision_at_k)"}};
  return r;
}

Dataset repair_and_impute(const Dataset& data,
                          const forge::HiddenRepairs& repairs,
                          const std::vector<std::string>& ids) {
  const Dataset repaired = forge::apply_repairs(data, repairs, ids);
  if (!repaired.has_missing_features()) return repaired;
  const auto d = static_cast<std::size_t>(repaired.dim());
  std::vector<double> sum(d, 0.0);
  std::vector<std::size_t> seen(d, 0);
  for (const Example& e : repaired.examples()) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!is_missing(e.features[j])) {
        sum[j] += e.features[j];
        ++seen[j];
      }
    }
  }
  std::vector<Example> examples = repaired.examples();
  for (Example& e : examples) {
    for (std::size_t j = 0; j < d; ++j) {
      if (is_missing(e.features[j])) {
        e.features[j] = seen[j] ? sum[j] / static_cast<double>(seen[j]) : 0.0;
      }
    }
  }
  return Dataset(repaired.id(), repaired.dim(), repaired.classes(),
                 std::move(examples));
}

}  // namespace dcbench::eval
