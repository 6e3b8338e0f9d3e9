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

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "dcbench/arena/arena.h"
#include "dcbench/arena/leaderboard.h"
#include "dcbench/arena/server.h"
#include "dcbench/arena/task.h"
#include "dcbench/core/io.h"
#include "dcbench/core/random.h"
#include "dcbench/evaluators/evaluators.h"
#include "dcbench/forge/bundle.h"
#include "dcbench/forge/registry.h"
#include "test_util.h"

namespace dcbench::arena {
namespace {

namespace fs = std::filesystem;
using forge::BenchmarkType;
using testing::TempDir;

const Timestamp kStart = parse_utc("2026-03-01T00:00:00Z");

// Deterministic clock: one second per reading.
struct StepClock {
  std::shared_ptr<std::atomic<Timestamp>> now = std::make_shared<std::atomic<Timestamp>>(kStart);
  Clock clock() const {
    auto n = now;
    return [n] { return n->fetch_add(1000000); };
  }
};

fs::path forge_to(const TempDir& dir, BenchmarkType type, Json options = Json::object(),
                  std::uint64_t seed = 1) {
  forge::ForgeSpec spec;
  spec.seed = seed;
  const fs::path out = dir / ("bundle-" + std::string(forge::benchmark_type_name(type)) + "-" +
                              std::to_string(seed));
  if (!fs::exists(out)) forge::forge_bundle(type, spec, options, out);
  return out;
}

ArenaOptions options_for(const TempDir& dir, const StepClock& clock, int workers = 1) {
  ArenaOptions o;
  o.data_root = dir / "root";
  o.workers = workers;
  o.clock = clock.clock();
  return o;
}

Json envelope(const std::string& task, Json payload, const std::string& submitter = "alice",
              const std::string& division = "open") {
  return {{"task_id", task}, {"division", division}, {"payload", std::move(payload)},
          {"submitter", submitter}, {"method_description", "test"}};
}

std::vector<std::string> first_ids(const Dataset& d, std::size_t n) {
  std::vector<std::string> ids = d.ids();
  ids.resize(n);
  return ids;
}

const forge::SelectionProblem& selection_of(const Arena&, const fs::path& bundle,
                                            forge::Bundle& storage) {
  storage = forge::load_bundle(bundle);
  return std::get<forge::SelectionProblem>(storage.problem);
}

// ---- Task configuration ------------------------------------------------------

TEST(Task, UtcRoundTrip) {
  EXPECT_EQ(format_utc(parse_utc("2026-03-01T12:34:56Z")), "2026-03-01T12:34:56.000000Z");
  EXPECT_EQ(parse_utc("1970-01-01T00:00:01.5Z"), 1500000);
  EXPECT_DCB_ERROR(parse_utc("yesterday"), ErrorCode::kParseError);
}

TEST(Task, ConfigValidation) {
  TaskConfig c;
  c.task_id = "t";
  c.open_at = 10;
  c.close_at = 5;
  EXPECT_DCB_ERROR(c.validate(), ErrorCode::kInvalidSpec);
  c.close_at = 20;
  c.divisions.clear();
  EXPECT_DCB_ERROR(c.validate(), ErrorCode::kInvalidSpec);
  c.divisions = {eval::Division::kOpen};
  c.rate_limit = RateLimit{3, 60};
  EXPECT_NO_THROW(c.validate());
  const TaskConfig back = task_config_from_json(to_json(c), "t");
  EXPECT_EQ(back.close_at, 20);
  EXPECT_EQ(back.rate_limit->max_submissions, 3);
  EXPECT_FALSE(back.accepts(eval::Division::kClosed));
}

TEST(Arena, RegistrationRules) {
  TempDir dir;
  StepClock clock;
  Arena a(options_for(dir, clock));
  const fs::path b = forge_to(dir, BenchmarkType::kSelection);
  a.register_task(TaskConfig{"sel"}, b);
  EXPECT_EQ(a.task_ids(), std::vector<std::string>{"sel"});
  EXPECT_DCB_ERROR(a.register_task(TaskConfig{"sel"}, b), ErrorCode::kDuplicateTaskId);

  const fs::path t = forge_to(dir, BenchmarkType::kDebugging);
  write_file(t / "hidden" / "repairs.json", "{}");
  EXPECT_DCB_ERROR(a.register_task(TaskConfig{"dbg"}, t), ErrorCode::kBundleHashMismatch);
  EXPECT_EQ(a.task_ids().size(), 1u);
  EXPECT_DCB_ERROR(a.task_summary("nope"), ErrorCode::kUnknownTask);
}

TEST(Arena, DetailListsOnlyPublicFiles) {
  TempDir dir;
  StepClock clock;
  Arena a(options_for(dir, clock));
  a.register_task(TaskConfig{"sel"}, forge_to(dir, BenchmarkType::kSelection));
  const Json detail = a.task_detail("sel");
  const std::string dumped = detail.dump();
  EXPECT_EQ(dumped.find("hidden/"), std::string::npos);
  for (const Json& f : detail.at("files")) {
    EXPECT_EQ(f.get<std::string>().find("concealed"), std::string::npos);
  }
  for (const Json& f : detail.at("files")) EXPECT_TRUE(a.public_file("sel", f).has_value());
  EXPECT_FALSE(a.public_file("sel", "hidden/test.csv").has_value());
  EXPECT_FALSE(a.public_file("sel", "../task.json").has_value());
}

// ---- Submission lifecycle ----------------------------------------------------

TEST(Arena, WindowAndValidation) {
  TempDir dir;
  StepClock clock;
  Arena a(options_for(dir, clock));
  const fs::path b = forge_to(dir, BenchmarkType::kSelection);
  TaskConfig c{"sel"};
  c.close_at = kStart + 5 * 1000000;
  a.register_task(c, b);
  forge::Bundle storage;
  const auto& p = selection_of(a, b, storage);

  const Receipt over = a.submit("sel", envelope("sel", {{"selected_ids", first_ids(p.pool, 51)}}));
  EXPECT_EQ(over.status, SubmissionStatus::kRejected);
  EXPECT_TRUE(over.report.has(eval::kBudgetExceeded));

  const Receipt ok = a.submit("sel", envelope("sel", {{"selected_ids", first_ids(p.pool, 50)}}));
  EXPECT_EQ(ok.status, SubmissionStatus::kQueued);
  a.drain();
  EXPECT_EQ(a.status(ok.submission_id), SubmissionStatus::kScored);
  ASSERT_EQ(a.records(ok.submission_id).size(), 1u);
  EXPECT_EQ(a.submission_view(ok.submission_id).at("score").at("metric_name"), "accuracy");

  const Receipt malformed = a.submit("sel", envelope("sel", {{"selected_ids", 3}}));
  EXPECT_TRUE(malformed.report.has(eval::kMalformedPayload));
  EXPECT_TRUE(a.submit("sel", envelope("other", {{"selected_ids", first_ids(p.pool, 5)}}))
                  .report.has(eval::kTaskMismatch));

  clock.now->store(kStart + 10 * 1000000);
  EXPECT_DCB_ERROR(a.submit("sel", envelope("sel", {{"selected_ids", first_ids(p.pool, 5)}})),
                   ErrorCode::kWindowClosed);
  EXPECT_DCB_ERROR(a.submit("ghost", envelope("ghost", {})), ErrorCode::kUnknownTask);
}

TEST(Arena, RateLimitAndDivisions) {
  TempDir dir;
  StepClock clock;
  Arena a(options_for(dir, clock));
  const fs::path b = forge_to(dir, BenchmarkType::kSelection);
  TaskConfig c{"sel"};
  c.rate_limit = RateLimit{2, 3600};
  c.divisions = {eval::Division::kOpen};
  a.register_task(c, b);
  forge::Bundle storage;
  const auto& p = selection_of(a, b, storage);
  const Json payload = {{"selected_ids", first_ids(p.pool, 10)}};
  a.submit("sel", envelope("sel", payload));
  a.submit("sel", envelope("sel", payload));
  EXPECT_DCB_ERROR(a.submit("sel", envelope("sel", payload)), ErrorCode::kRateLimited);
  EXPECT_EQ(a.submit("sel", envelope("sel", payload, "bob")).status, SubmissionStatus::kQueued);
  Json closed = envelope("sel", payload, "carol", "closed");
  closed["regeneration_artifact"] = {{"content_hash", "x"}, {"command", "y"}};
  EXPECT_TRUE(a.submit("sel", closed).report.has("DivisionNotAllowed"));
  a.drain();
}

TEST(Arena, ClosedDivisionVerification) {
  TempDir dir;
  StepClock clock;
  Arena a(options_for(dir, clock));
  const fs::path b = forge_to(dir, BenchmarkType::kSelection);
  a.register_task(TaskConfig{"sel"}, b);
  forge::Bundle storage;
  const auto& p = selection_of(a, b, storage);
  const Json payload = {{"selected_ids", first_ids(p.pool, 20)}};
  Json closed = envelope("sel", payload, "carol", "closed");
  closed["regeneration_artifact"] = {{"content_hash", "abc"}, {"command", "./select"}};
  const Receipt good = a.submit("sel", closed);
  closed["submitter"] = "dave";
  const Receipt bad = a.submit("sel", closed);
  const Receipt open = a.submit("sel", envelope("sel", payload));
  a.drain();

  const LeaderboardQuery closed_only{eval::Division::kClosed, false};
  EXPECT_TRUE(a.leaderboard("sel", closed_only).empty());  // nothing verified yet
  EXPECT_TRUE(a.verify_closed(good.submission_id, eval::payload_hash(payload)));
  EXPECT_FALSE(a.verify_closed(bad.submission_id, "deadbeef"));
  const auto board = a.leaderboard("sel", closed_only);
  ASSERT_EQ(board.size(), 1u);
  EXPECT_EQ(board[0].submission_id, good.submission_id);
  EXPECT_TRUE(board[0].verified);
  EXPECT_DCB_ERROR(a.verify_closed(open.submission_id, "x"), ErrorCode::kNotApplicable);
  EXPECT_DCB_ERROR(a.verify_closed("s999999", "x"), ErrorCode::kUnknownSubmission);
}

// ---- Test-set dilution -------------------------------------------------------

struct TestSetFixture {
  TempDir dir;
  StepClock clock;
  std::unique_ptr<Arena> arena;
  forge::Bundle bundle;
  std::vector<std::pair<std::string, std::string>> hard;  // (id, true label), credit > 0

  TestSetFixture() {
    const fs::path b = forge_to(dir, BenchmarkType::kTestSet);
    arena = std::make_unique<Arena>(options_for(dir, clock));
    arena->register_task(TaskConfig{"ts"}, b);
    bundle = forge::load_bundle(b);
    const auto& p = std::get<forge::TestSetProblem>(bundle.problem);
    const eval::TestSetOracle oracle(p);
    for (const Example& e : p.candidate_pool.examples()) {
      const std::string label = p.candidate_pool.classes()[*e.label];
      if (oracle.undiluted_credit(e.id, label) > 0) hard.push_back({e.id, label});
    }
  }

  Json payload(std::initializer_list<std::size_t> which) const {
    Json ex = Json::array();
    for (std::size_t i : which) ex.push_back({{"example_id", hard[i].first}, {"label", hard[i].second}});
    return {{"examples", ex}};
  }

  double credit(const std::string& sub, const std::string& example) const {
    const auto records = arena->records(sub);
    for (const Json& e : records.at(0).breakdown.at("examples")) {
      if (e.at("example_id") == example) return e.at("credit");
    }
    ADD_FAILURE() << example << " not in " << sub;
    return -1;
  }
};

TEST(Arena, SharedExampleHalvesAndWithdrawalRestoresCredit) {
  TestSetFixture f;
  ASSERT_GE(f.hard.size(), 3u);
  const std::string e = f.hard[0].first;
  const Receipt s1 = f.arena->submit("ts", envelope("ts", f.payload({0, 1}), "alice"));
  f.arena->drain();
  const double c = f.credit(s1.submission_id, e);
  EXPECT_GT(c, 0.0);

  const Receipt s2 = f.arena->submit("ts", envelope("ts", f.payload({0, 2}), "bob"));
  f.arena->drain();
  EXPECT_EQ(f.credit(s1.submission_id, e), c / 2);
  EXPECT_EQ(f.credit(s2.submission_id, e), c / 2);
  EXPECT_EQ(f.credit(s1.submission_id, f.hard[1].first),
            eval::TestSetOracle(std::get<forge::TestSetProblem>(f.bundle.problem))
                .undiluted_credit(f.hard[1].first, f.hard[1].second));

  f.arena->withdraw(s2.submission_id);
  EXPECT_EQ(f.credit(s1.submission_id, e), c);
  EXPECT_DCB_ERROR(f.arena->withdraw(s2.submission_id), ErrorCode::kNotApplicable);

  // A rejected submission holding E does not dilute it.
  Json bad = f.payload({0});
  bad["examples"].push_back({{"example_id", "nope"}, {"label", "c0"}});
  EXPECT_EQ(f.arena->submit("ts", envelope("ts", bad, "eve")).status, SubmissionStatus::kRejected);
  f.arena->rescore_test_set("ts");
  EXPECT_EQ(f.credit(s1.submission_id, e), c);
}

TEST(Arena, RescoreWithNoSubmissionsIsEmpty) {
  TestSetFixture f;
  EXPECT_TRUE(f.arena->rescore_test_set("ts").empty());
  TempDir dir;
  StepClock clock;
  Arena a(options_for(dir, clock));
  a.register_task(TaskConfig{"sel"}, forge_to(dir, BenchmarkType::kSelection));
  EXPECT_DCB_ERROR(a.rescore_test_set("sel"), ErrorCode::kWrongTaskType);
}

TEST(Arena, ConservationAfterEveryRescoreProperty) {
  TestSetFixture f;
  ASSERT_GE(f.hard.size(), 8u);
  const auto& p = std::get<forge::TestSetProblem>(f.bundle.problem);
  const eval::TestSetOracle oracle(p);
  Rng rng(3);
  std::vector<std::string> live;
  for (int round = 0; round < 12; ++round) {
    if (!live.empty() && rng.below(3) == 0) {
      const std::size_t k = rng.below(live.size());
      f.arena->withdraw(live[k]);
      live.erase(live.begin() + static_cast<long>(k));
    } else {
      Json ex = Json::array();
      for (std::size_t i : rng.sample_without_replacement(8, 1 + rng.below(4))) {
        ex.push_back({{"example_id", f.hard[i].first}, {"label", f.hard[i].second}});
      }
      live.push_back(f.arena->submit("ts", envelope("ts", {{"examples", ex}}, "u" + std::to_string(round)))
                         .submission_id);
      f.arena->drain();
    }
    std::map<std::string, long> numerators, holders;
    for (const std::string& s : live) {
      const auto records = f.arena->records(s);
      for (const Json& e : records.at(0).breakdown.at("examples")) {
        numerators[e.at("example_id")] += e.at("model_failures").get<long>();
        holders[e.at("example_id")] = e.at("containment");
      }
    }
    for (const auto& [id, num] : numerators) {
      // Each of k holders gets failures/(m*k): k of them sum to failures/m.
      EXPECT_EQ(num, static_cast<long>(oracle.failures(id)) * holders.at(id)) << id;
    }
  }
}

// ---- Restart and leakage -----------------------------------------------------

TEST(Arena, RestartReproducesLeaderboards) {
  TempDir dir;
  StepClock clock;
  std::string before_sel, before_ts, before_view;
  std::vector<eval::ScoreRecord> before_records;
  std::string ts_sub;
  {
    Arena a(options_for(dir, clock, 2));
    const fs::path sb = forge_to(dir, BenchmarkType::kSelection);
    a.register_task(TaskConfig{"sel"}, sb);
    a.register_task(TaskConfig{"ts"}, forge_to(dir, BenchmarkType::kTestSet));
    forge::Bundle storage;
    const auto& p = selection_of(a, sb, storage);
    for (std::size_t n : {10u, 30u, 50u}) {
      a.submit("sel", envelope("sel", {{"selected_ids", first_ids(p.pool, n)}}, "u" + std::to_string(n)));
    }
    TestSetFixture probe;  // only to pick hard examples from the same bundle seed
    a.submit("ts", envelope("ts", probe.payload({0, 1})));
    ts_sub = a.submit("ts", envelope("ts", probe.payload({1, 2}), "bob")).submission_id;
    a.drain();
    before_sel = a.leaderboard_json("sel", {}).dump();
    before_ts = a.leaderboard_json("ts", {std::nullopt, true}).dump();
    before_view = a.submission_view(ts_sub).dump();
    before_records = a.records(ts_sub);
  }
  Arena b(options_for(dir, clock));
  EXPECT_EQ(b.replay_mismatches(), 0u);
  EXPECT_EQ(b.leaderboard_json("sel", {}).dump(), before_sel);
  EXPECT_EQ(b.leaderboard_json("ts", {std::nullopt, true}).dump(), before_ts);
  EXPECT_EQ(b.submission_view(ts_sub).dump(), before_view);
  EXPECT_EQ(b.records(ts_sub), before_records);
}

TEST(Arena, ReplayDetectsAlteredScores) {
  TempDir dir;
  StepClock clock;
  std::string sub;
  {
    Arena a(options_for(dir, clock));
    const fs::path sb = forge_to(dir, BenchmarkType::kSelection);
    a.register_task(TaskConfig{"sel"}, sb);
    forge::Bundle storage;
    sub = a.submit("sel", envelope("sel", {{"selected_ids", first_ids(selection_of(a, sb, storage).pool, 20)}}))
              .submission_id;
    a.drain();
  }
  const fs::path log = dir / "root" / kLogFile;
  std::string text = read_file(log);
  const auto pos = text.find("\"value\":");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 9, "\"value\":1");
  write_file(log, text);
  Arena b(options_for(dir, clock));
  EXPECT_EQ(b.replay_mismatches(), 1u);
}

// Every participant-facing response for every task type, serialized.
std::vector<std::string> participant_responses(Arena& a, const std::string& task,
                                               const std::vector<std::string>& subs) {
  std::vector<std::string> out;
  out.push_back(a.task_summary(task).dump());
  const Json detail = a.task_detail(task);
  out.push_back(detail.dump());
  for (const Json& f : detail.at("files")) out.push_back(*a.public_file(task, f));
  for (const std::string& s : subs) out.push_back(a.submission_view(s).dump());
  out.push_back(a.leaderboard_json(task, {std::nullopt, true}).dump());
  return out;
}

// Tokens that would reveal a hidden example-level label: the labeled CSV row
// and JSON pairings of the id with its label. Ids repeat across valuation
// problems, so the CSV token carries the features too.
std::vector<std::string> hidden_label_tokens(const Dataset& hidden, bool unique_ids) {
  std::vector<std::string> tokens;
  std::istringstream rows(dataset_to_csv(hidden));
  std::string row;
  std::getline(rows, row);  // header
  while (std::getline(rows, row)) tokens.push_back(row);
  for (const Example& e : hidden.examples()) {
    if (!e.label) continue;
    const std::string label = hidden.classes()[*e.label];
    if (unique_ids) tokens.push_back(e.id + "," + label + ",");
    tokens.push_back("\"" + e.id + "\":\"" + label + "\"");
    tokens.push_back("\"example_id\":\"" + e.id + "\",\"label\":\"" + label + "\"");
  }
  return tokens;
}

TEST(Arena, NoHiddenLabelsInParticipantResponses) {
  TempDir dir;
  StepClock clock;
  Arena a(options_for(dir, clock));
  std::map<std::string, std::vector<std::string>> subs;
  std::map<std::string, std::vector<Dataset>> hidden;
  for (BenchmarkType t : {BenchmarkType::kTrainingSet, BenchmarkType::kTestSet,
                          BenchmarkType::kSelection, BenchmarkType::kDebugging,
                          BenchmarkType::kValuation, BenchmarkType::kSlicing}) {
    const std::string id(forge::benchmark_type_name(t));
    Json opts = Json::object();
    if (t == BenchmarkType::kValuation) opts["num_problems"] = 2;
    if (t == BenchmarkType::kSlicing) opts["num_problems"] = 1;
    if (t == BenchmarkType::kDebugging) opts["null_rate"] = 0.01;
    a.register_task(TaskConfig{id}, forge_to(dir, t, opts));
    const forge::Bundle b = forge::load_bundle(dir / "root" / kTasksDir / id);
    Json payload;
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, forge::TrainingSetProblem>) {
            // Only labels that the public noisy copy gets wrong are secret.
            std::vector<std::string> flipped;
            for (const Example& e : p.clean_train.examples()) {
              const auto r = p.reference_train.find(e.id);
              if (r && p.reference_train[*r].label != e.label) flipped.push_back(e.id);
            }
            hidden[id] = {p.clean_train.subset(flipped), p.hidden_test};
            Json rows = Json::array();
            for (const Example& e : p.reference_train.examples()) {
              rows.push_back({{"example_id", "n" + e.id},
                              {"label", p.reference_train.classes()[*e.label]},
                              {"features", e.features}});
            }
            payload = {{"examples", rows}};
          } else if constexpr (std::is_same_v<P, forge::TestSetProblem>) {
            hidden[id] = {p.candidate_pool};
            Json ex = Json::array();
            for (std::size_t i = 0; i < 20; ++i) {
              const Example& e = p.candidate_pool[i];
              ex.push_back({{"example_id", e.id}, {"label", i % 2 ? "c0" : "c1"}});
            }
            payload = {{"examples", ex}};
          } else if constexpr (std::is_same_v<P, forge::SelectionProblem>) {
            hidden[id] = {p.hidden_test, p.concealed->pool, p.concealed->hidden_test};
            payload = {{"selected_ids", first_ids(p.pool, 50)},
                       {"concealed_ids", first_ids(p.concealed->pool, 50)}};
          } else if constexpr (std::is_same_v<P, forge::DebuggingProblem>) {
            std::vector<Example> truth;
            for (const auto& [eid, r] : p.hidden_repairs) {
              if (r.label) truth.push_back(Example{eid, std::vector<double>(p.dirty_train.dim(), 0.0), r.label});
            }
            hidden[id] = {Dataset("truth", p.dirty_train.dim(), p.dirty_train.classes(), truth), p.hidden_test};
            payload = {{"repair_ids", first_ids(p.dirty_train, 60)}};
          } else if constexpr (std::is_same_v<P, forge::ValuationBatch>) {
            Json est = Json::object();
            for (const auto& v : p.problems) {
              hidden[id].push_back(v.d_b);
              est[v.problem_id] = 0.5;
            }
            payload = {{"estimates", est}};
          } else {
            Json r = Json::object();
            for (const auto& sp : p.problems) r[sp.problem_id] = Json::array({Json(first_ids(sp.dataset, sp.k))});
            payload = {{"rankings", r}};
          }
        },
        b.problem);
    const Receipt r = a.submit(id, envelope(id, payload));
    ASSERT_EQ(r.status, SubmissionStatus::kQueued) << id << to_json(r.report).dump();
    subs[id].push_back(r.submission_id);
  }
  a.drain();
  for (const auto& [task, datasets] : hidden) {
    const std::vector<std::string> responses = participant_responses(a, task, subs[task]);
    for (const std::string& resp : responses) {
      EXPECT_EQ(resp.find("hidden/"), std::string::npos) << task;
      EXPECT_EQ(resp.find("failure_fraction"), std::string::npos) << task;
      EXPECT_EQ(resp.find("true_accuracy"), std::string::npos) << task;
    }
    std::size_t scanned = 0;
    for (const Dataset& d : datasets) {
      for (const std::string& tok : hidden_label_tokens(d, task != "valuation")) {
        ++scanned;
        for (const std::string& resp : responses) {
          ASSERT_EQ(resp.find(tok), std::string::npos) << task << " leaks " << tok;
        }
      }
    }
    if (task != "slicing") EXPECT_GT(scanned, 0u) << task;
  }
}

TEST(Arena, WorkerCountDoesNotChangeRecords) {
  std::vector<std::vector<eval::ScoreRecord>> runs;
  for (int workers : {1, 3}) {
    TempDir dir;
    StepClock clock;
    Arena a(options_for(dir, clock, workers));
    const fs::path sb = forge_to(dir, BenchmarkType::kSelection);
    a.register_task(TaskConfig{"sel"}, sb);
    forge::Bundle storage;
    const auto& p = selection_of(a, sb, storage);
    std::vector<std::string> ids;
    for (std::size_t n = 5; n <= 50; n += 9) {
      ids.push_back(a.submit("sel", envelope("sel", {{"selected_ids", first_ids(p.pool, n)}})).submission_id);
    }
    a.drain();
    std::vector<eval::ScoreRecord> all;
    for (const std::string& id : ids) {
      for (const auto& r : a.records(id)) all.push_back(r);
    }
    runs.push_back(all);
  }
  EXPECT_EQ(runs[0], runs[1]);
}

// ---- Leaderboard ordering ----------------------------------------------------

LeaderboardEntry entry(std::string id, double v, Timestamp at, std::string who = "") {
  LeaderboardEntry e;
  e.submission_id = id;
  e.submitter = who.empty() ? id : who;
  e.value = v;
  e.submitted_at = at;
  return e;
}

TEST(Leaderboard, OrderingFixtures) {
  auto ranked = rank_entries({entry("a", 0.89, 1), entry("b", 0.91, 2)}, true, {});
  EXPECT_EQ(ranked[0].submission_id, "b");
  ranked = rank_entries({entry("a", 0.5, 9), entry("b", 0.5, 3)}, true, {});
  EXPECT_EQ(ranked[0].submission_id, "b");
  ranked = rank_entries({entry("a", 0.20, 1), entry("b", 0.10, 2)}, false, {});
  EXPECT_EQ(ranked[0].submission_id, "b");
}

TEST(Leaderboard, BestPerSubmitterUnlessHistory) {
  const std::vector<LeaderboardEntry> es = {entry("s1", 0.7, 1, "al"), entry("s2", 0.9, 2, "al"),
                                            entry("s3", 0.8, 3, "bo")};
  const auto best = rank_entries(es, true, {});
  ASSERT_EQ(best.size(), 2u);
  EXPECT_EQ(best[0].submission_id, "s2");
  EXPECT_EQ(best[1].submission_id, "s3");
  EXPECT_EQ(rank_entries(es, true, {std::nullopt, true}).size(), 3u);
  LeaderboardEntry closed = entry("s4", 1.0, 4, "cy");
  closed.division = eval::Division::kClosed;
  std::vector<LeaderboardEntry> with_closed = es;
  with_closed.push_back(closed);
  EXPECT_EQ(rank_entries(with_closed, true, {eval::Division::kClosed, false}).size(), 0u);
  with_closed.back().verified = true;
  EXPECT_EQ(rank_entries(with_closed, true, {}).front().submission_id, "s4");
  EXPECT_EQ(display_value(0.123456), "0.1235");
}

TEST(Leaderboard, ComparatorIsATotalOrderProperty) {
  Rng rng(8);
  for (bool higher : {true, false}) {
    const EntryOrder less{higher};
    std::vector<LeaderboardEntry> es;
    for (int i = 0; i < 40; ++i) {
      es.push_back(entry("s" + std::to_string(rng.below(30)), static_cast<double>(rng.below(4)) / 4,
                         static_cast<Timestamp>(rng.below(4))));
    }
    for (const auto& a : es) {
      EXPECT_FALSE(less(a, a));
      for (const auto& b : es) {
        const bool same = a.value == b.value && a.submitted_at == b.submitted_at &&
                          a.submission_id == b.submission_id;
        if (!same) EXPECT_NE(less(a, b), less(b, a));
        for (const auto& c : es) {
          if (less(a, b) && less(b, c)) EXPECT_TRUE(less(a, c));
        }
      }
    }
  }
}

// ---- HTTP surface ------------------------------------------------------------

struct Served {
  TempDir dir;
  StepClock clock;
  std::unique_ptr<Arena> arena;
  std::unique_ptr<Server> server;
  std::thread thread;
  int port = 0;

  Served() {
    arena = std::make_unique<Arena>(options_for(dir, clock));
    server = std::make_unique<Server>(*arena);
    port = server->bind("127.0.0.1", 0);
    thread = std::thread([this] { server->serve(); });
    while (!server->running()) std::this_thread::yield();
  }
  ~Served() {
    server->stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  }
};

TEST(Server, StatusCodes) {
  EXPECT_EQ(http_status(ErrorCode::kUnknownTask), 404);
  EXPECT_EQ(http_status(ErrorCode::kWindowClosed), 403);
  EXPECT_EQ(http_status(ErrorCode::kRateLimited), 429);
  EXPECT_EQ(http_status(ErrorCode::kParseError), 400);
  EXPECT_EQ(http_status(ErrorCode::kNotApplicable), 409);
  EXPECT_EQ(http_status(ErrorCode::kValidationFailed), 422);
  EXPECT_EQ(http_status(ErrorCode::kIoError), 500);
  EXPECT_EQ(parse_listen_address("0.0.0.0:81"), (std::pair<std::string, int>{"0.0.0.0", 81}));
  EXPECT_DCB_ERROR(parse_listen_address("nohost"), ErrorCode::kInvalidSpec);
}

TEST(Server, EndToEndOverHttp) {
  Served s;
  const fs::path sb = forge_to(s.dir, BenchmarkType::kSelection);
  s.arena->register_task(TaskConfig{"sel"}, sb);
  forge::Bundle storage;
  const auto& p = selection_of(*s.arena, sb, storage);
  auto c = s.client();

  auto tasks = c.Get("/tasks");
  ASSERT_TRUE(tasks);
  EXPECT_EQ(tasks->status, 200);
  EXPECT_NE(tasks->body.find("\"sel\""), std::string::npos);
  EXPECT_EQ(c.Get("/tasks/nope")->status, 404);
  EXPECT_EQ(c.Get("/tasks/sel/files/pool.csv")->status, 200);
  EXPECT_EQ(c.Get("/tasks/sel/files/hidden%2Ftest.csv")->status, 404);
  auto unknown = c.Get("/nowhere");
  EXPECT_EQ(unknown->status, 404);
  EXPECT_NO_THROW((void)Json::parse(unknown->body).at("error"));

  const std::string good = envelope("sel", {{"selected_ids", first_ids(p.pool, 50)}}).dump();
  auto accepted = c.Post("/tasks/sel/submissions", good, "application/json");
  ASSERT_EQ(accepted->status, 202);
  const std::string id = Json::parse(accepted->body).at("submission_id");
  EXPECT_EQ(Json::parse(accepted->body).at("status"), "queued");

  const std::string over = envelope("sel", {{"selected_ids", first_ids(p.pool, 51)}}).dump();
  auto rejected = c.Post("/tasks/sel/submissions", over, "application/json");
  EXPECT_EQ(rejected->status, 422);
  EXPECT_EQ(Json::parse(rejected->body).at("error"), "ValidationFailed");
  EXPECT_EQ(c.Post("/tasks/sel/submissions", "{not json", "application/json")->status, 400);

  s.arena->drain();
  const Json view = Json::parse(c.Get("/submissions/" + id)->body);
  EXPECT_EQ(view.at("status"), "scored");
  const Json board = Json::parse(c.Get("/tasks/sel/leaderboard")->body);
  ASSERT_EQ(board.at("entries").size(), 1u);
  EXPECT_EQ(board.at("entries")[0].at("value"), view.at("score").at("value"));
  EXPECT_EQ(c.Get("/submissions/s999999")->status, 404);
  EXPECT_EQ(c.Post("/tasks/sel/rescore", "", "application/json")->status, 409);
  EXPECT_EQ(c.Post("/tasks/sel/verify", Json{{"submission_id", id}, {"output_hash", "x"}}.dump(),
                   "application/json")->status, 409);
  EXPECT_EQ(c.Post("/submissions/" + id + "/withdraw", "", "application/json")->status, 200);
  EXPECT_TRUE(Json::parse(c.Get("/tasks/sel/leaderboard")->body).at("entries").empty());
}

}  // namespace
}  // namespace dcbench::arena
