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

#include "dcbench/arena/arena.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>

#include "dcbench/core/error.h"

namespace dcbench::arena {

namespace fs = std::filesystem;
using forge::BenchmarkType;

std::string_view status_name(SubmissionStatus s) {
  switch (s) {
    case SubmissionStatus::kQueued: return "queued";
    case SubmissionStatus::kScored: return "scored";
    case SubmissionStatus::kRejected: return "rejected";
    case SubmissionStatus::kWithdrawn: return "withdrawn";
    case SubmissionStatus::kFailed: return "failed";
  }
  return "unknown";
}

namespace {

SubmissionStatus parse_status(const std::string& s) {
  for (SubmissionStatus v :
       {SubmissionStatus::kQueued, SubmissionStatus::kScored,
        SubmissionStatus::kRejected, SubmissionStatus::kWithdrawn,
        SubmissionStatus::kFailed}) {
    if (status_name(v) == s) return v;
  }
  throw Error(ErrorCode::kParseError, "unknown submission status " + s);
}

// Accepted and still counted: queued or scored.
bool active(SubmissionStatus s) {
  return s == SubmissionStatus::kQueued || s == SubmissionStatus::kScored;
}

Json records_json(const std::vector<eval::ScoreRecord>& records) {
  Json out = Json::array();
  for (const eval::ScoreRecord& r : records) out.push_back(eval::to_json(r));
  return out;
}

}  // namespace

Json to_json(const Receipt& r) {
  return {{"submission_id", r.submission_id},
          {"status", status_name(r.status)},
          {"report", eval::to_json(r.report)}};
}

Timestamp system_now() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Json public_record(const eval::ScoreRecord& record, BenchmarkType type) {
  Json j = eval::to_json(record);
  Json& b = j["breakdown"];
  switch (type) {
    case BenchmarkType::kTestSet:
      b = {{"aggregation", b.value("aggregation", "sum")},
           {"num_examples", b.contains("examples") ? b.at("examples").size() : 0}};
      break;
    case BenchmarkType::kValuation:
      if (b.contains("problems")) {
        for (Json& p : b["problems"]) {
          p.erase("true_accuracy");
          p.erase("abs_error");
        }
      }
      break;
    case BenchmarkType::kDebugging:
      b.erase("num_corrupted_repaired");
      break;
    default:
      break;
  }
  return j;
}

Arena::Arena(ArenaOptions options) : options_(std::move(options)) {
  if (options_.data_root.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "arena needs a data root");
  }
  fs::create_directories(options_.data_root / kTasksDir);
  load_tasks();
  replay();
  log_.open(options_.data_root / kLogFile, std::ios::app | std::ios::binary);
  if (!log_) {
    throw Error(ErrorCode::kIoError,
                "cannot open " + (options_.data_root / kLogFile).string());
  }
  const int n = std::max(1, options_.workers);
  for (int i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
  std::unique_lock lock(mu_);
  for (const std::string& id : order_) {
    const SubmissionState& s = submissions_.at(id);
    if (s.status == SubmissionStatus::kQueued) enqueue(id);
  }
}

Arena::~Arena() {
  {
    std::lock_guard lock(queue_mu_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  commit_cv_.notify_all();
  for (std::thread& t : workers_) t.join();
}

void Arena::load_tasks() {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(options_.data_root / kTasksDir)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    add_task(load_task(dir, dir.filename().string()));
  }
}

void Arena::add_task(Task task) {
  const std::string id = task.id();
  if (tasks_.contains(id)) throw Error(ErrorCode::kDuplicateTaskId, id);
  tasks_.emplace(id, TaskState{std::move(task), {}});
}

std::string Arena::register_task(const TaskConfig& config,
                                 const fs::path& bundle_dir) {
  std::unique_lock lock(mu_);
  if (tasks_.contains(config.task_id)) {
    throw Error(ErrorCode::kDuplicateTaskId, config.task_id);
  }
  const fs::path dest =
      install_task(options_.data_root / kTasksDir, config, bundle_dir);
  try {
    add_task(load_task(dest, config.task_id));
  } catch (...) {
    fs::remove_all(dest);
    throw;
  }
  return config.task_id;
}

const Arena::TaskState& Arena::task_state(const std::string& task_id) const {
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) throw Error(ErrorCode::kUnknownTask, task_id);
  return it->second;
}

const Arena::SubmissionState& Arena::submission(const std::string& id) const {
  auto it = submissions_.find(id);
  if (it == submissions_.end()) throw Error(ErrorCode::kUnknownSubmission, id);
  return it->second;
}

std::vector<std::string> Arena::task_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, t] : tasks_) ids.push_back(id);
  return ids;
}

Json Arena::task_summary(const std::string& task_id) const {
  std::shared_lock lock(mu_);
  return task_state(task_id).task.summary();
}

Json Arena::task_detail(const std::string& task_id) const {
  std::shared_lock lock(mu_);
  const Task& t = task_state(task_id).task;
  Json j = t.summary();
  j["manifest"] = t.public_manifest();
  j["files"] = t.public_files();
  return j;
}

std::optional<std::string> Arena::public_file(const std::string& task_id,
                                              const std::string& name) const {
  std::shared_lock lock(mu_);
  return task_state(task_id).task.read_public_file(name);
}

std::string Arena::next_submission_id() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%06zu", order_.size() + 1);
  return buf;
}

void Arena::append(const Json& event) {
  if (!log_.is_open()) return;  // replay in progress
  log_ << event.dump() << '\n';
  log_.flush();
  if (!log_) throw Error(ErrorCode::kIoError, "submission log write failed");
}

Receipt Arena::submit(const std::string& task_id, const Json& envelope) {
  std::unique_lock lock(mu_);
  const Task& task = task_state(task_id).task;
  const Timestamp now = options_.clock();
  if (now < task.config.open_at || now >= task.config.close_at) {
    throw Error(ErrorCode::kWindowClosed,
                "task " + task_id + " accepts submissions from " +
                    format_utc(task.config.open_at) + " until " +
                    format_utc(task.config.close_at));
  }
  eval::Submission sub = eval::parse_submission(envelope);
  if (const auto& limit = task.config.rate_limit) {
    const Timestamp since = now - limit->per_seconds * 1000000;
    int recent = 0;
    for (const auto& [id, s] : submissions_) {
      if (s.task_id == task_id && s.envelope.submitter == sub.submitter &&
          s.submitted_at > since) {
        ++recent;
      }
    }
    if (recent >= limit->max_submissions) {
      throw Error(ErrorCode::kRateLimited,
                  sub.submitter + " reached " + std::to_string(limit->max_submissions) +
                      " submissions per " + std::to_string(limit->per_seconds) + " s");
    }
  }

  eval::ValidationReport report;
  try {
    report = eval::validate(sub, task.bundle.problem, task_id);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParseError) throw;
    report.violations.push_back({eval::kMalformedPayload, e.what()});
  }
  if (!task.config.accepts(sub.division)) {
    report.violations.push_back(
        {"DivisionNotAllowed", std::string(eval::division_name(sub.division))});
  }

  SubmissionState s;
  s.id = next_submission_id();
  s.task_id = task_id;
  s.submitted_at = now;
  s.envelope = std::move(sub);
  s.status = report.ok() ? SubmissionStatus::kQueued : SubmissionStatus::kRejected;
  s.report = report;
  append({{"event", "submission"},
          {"submission_id", s.id},
          {"task_id", task_id},
          {"submitted_at", now},
          {"envelope", eval::to_json(s.envelope)},
          {"status", status_name(s.status)},
          {"report", eval::to_json(report)}});
  Receipt receipt{s.id, s.status, report};
  order_.push_back(s.id);
  const std::string id = s.id;
  submissions_.emplace(id, std::move(s));
  if (receipt.status == SubmissionStatus::kQueued) enqueue(id);
  return receipt;
}

void Arena::enqueue(const std::string& submission_id) {
  {
    std::lock_guard lock(queue_mu_);
    queue_.push_back(Job{next_seq_++, submission_id});
  }
  queue_cv_.notify_one();
}

eval::ContainmentCounts Arena::containment(const std::string& task_id) const {
  eval::ContainmentCounts counts;
  for (const std::string& id : order_) {
    const SubmissionState& s = submissions_.at(id);
    if (s.task_id != task_id || !active(s.status)) continue;
    for (const Json& e : s.envelope.payload.at("examples")) {
      ++counts[e.at("example_id").get<std::string>()];
    }
  }
  return counts;
}

std::vector<eval::ScoreRecord> Arena::compute(const SubmissionState& s) const {
  const Task& task = tasks_.at(s.task_id).task;
  return eval::score_submission(task.bundle.problem, s.envelope,
                                eval::context_for(task.bundle, s.id));
}

std::vector<eval::ScoreRecord> Arena::compute_test_set(
    const SubmissionState& s) const {
  const Task& task = tasks_.at(s.task_id).task;
  eval::ScoreContext ctx = eval::context_for(task.bundle, s.id);
  ctx.containment = containment(s.task_id);
  return eval::score_submission(task.bundle.problem, s.envelope, ctx);
}

void Arena::rescore_locked(const std::string& task_id) {
  TaskState& ts = tasks_.at(task_id);
  const eval::ContainmentCounts counts = containment(task_id);
  std::map<std::string, eval::ScoreRecord> current;
  for (const std::string& id : order_) {
    const SubmissionState& s = submissions_.at(id);
    if (s.task_id != task_id || s.status != SubmissionStatus::kScored) continue;
    eval::ScoreContext ctx = eval::context_for(ts.task.bundle, s.id);
    ctx.containment = counts;
    current.emplace(id, eval::score_submission(ts.task.bundle.problem, s.envelope,
                                               ctx).front());
  }
  ts.current = std::move(current);
}

void Arena::worker_loop() {
  for (;;) {
    Job job;
    {
      std::unique_lock lock(queue_mu_);
      queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = queue_.front();
      queue_.pop_front();
    }

    // Bundles and envelopes are immutable once registered, so scoring can
    // run without the state lock; only the lookups need it.
    const SubmissionState* s = nullptr;
    const Task* task = nullptr;
    {
      std::shared_lock lock(mu_);
      s = &submissions_.at(job.submission_id);
      task = &tasks_.at(s->task_id).task;
    }
    const bool test_set = task->type() == BenchmarkType::kTestSet;
    std::vector<eval::ScoreRecord> records;
    std::string failure;
    if (!test_set) {
      try {
        records = eval::score_submission(task->bundle.problem, s->envelope,
                                         eval::context_for(task->bundle, s->id));
      } catch (const std::exception& e) {
        failure = e.what();
      }
    }

    {
      std::unique_lock lock(queue_mu_);
      commit_cv_.wait(lock, [&] { return stopping_ || committed_seq_ == job.seq; });
      if (stopping_) return;
    }
    {
      std::unique_lock lock(mu_);
      SubmissionState& state = submissions_.at(job.submission_id);
      if (test_set) {
        try {
          records = compute_test_set(state);
        } catch (const std::exception& e) {
          failure = e.what();
        }
      }
      if (failure.empty()) {
        state.records = records;
        if (state.status == SubmissionStatus::kQueued) {
          state.status = SubmissionStatus::kScored;
        }
        append({{"event", "score"},
                {"submission_id", state.id},
                {"records", records_json(records)}});
      } else {
        state.failure = failure;
        if (state.status == SubmissionStatus::kQueued) {
          state.status = SubmissionStatus::kFailed;
        }
        append({{"event", "score_failed"},
                {"submission_id", state.id},
                {"error", failure}});
      }
      if (test_set) rescore_locked(state.task_id);
    }
    {
      std::lock_guard lock(queue_mu_);
      ++committed_seq_;
    }
    commit_cv_.notify_all();
  }
}

void Arena::drain() {
  std::unique_lock lock(queue_mu_);
  commit_cv_.wait(lock, [&] { return stopping_ || committed_seq_ == next_seq_; });
}

void Arena::replay() {
  const fs::path path = options_.data_root / kLogFile;
  if (!fs::exists(path)) return;
  const std::string text = read_file(path);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    Json ev;
    try {
      ev = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const std::string kind = ev.at("event").get<std::string>();
    const std::string id = ev.at("submission_id").get<std::string>();
    if (kind == "submission") {
      SubmissionState s;
      s.id = id;
      s.task_id = ev.at("task_id").get<std::string>();
      task_state(s.task_id);
      s.submitted_at = ev.at("submitted_at").get<Timestamp>();
      s.envelope = eval::parse_submission(ev.at("envelope"));
      s.status = parse_status(ev.at("status").get<std::string>());
      s.report = eval::validation_report_from_json(ev.at("report"));
      order_.push_back(id);
      submissions_.emplace(id, std::move(s));
      continue;
    }
    auto it = submissions_.find(id);
    if (it == submissions_.end()) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(line_no) +
                      ": event for unknown submission " + id);
    }
    SubmissionState& s = it->second;
    const bool test_set =
        tasks_.at(s.task_id).task.type() == BenchmarkType::kTestSet;
    if (kind == "score") {
      for (const Json& r : ev.at("records")) {
        s.records.push_back(eval::score_record_from_json(r));
      }
      if (options_.verify_replay) {
        const std::vector<eval::ScoreRecord> again =
            test_set ? compute_test_set(s) : compute(s);
        if (records_json(again).dump() != ev.at("records").dump()) {
          ++replay_mismatches_;
        }
      }
      if (s.status == SubmissionStatus::kQueued) s.status = SubmissionStatus::kScored;
    } else if (kind == "score_failed") {
      s.failure = ev.at("error").get<std::string>();
      if (s.status == SubmissionStatus::kQueued) s.status = SubmissionStatus::kFailed;
    } else if (kind == "verify") {
      s.verified = ev.at("verified").get<bool>();
    } else if (kind == "withdraw") {
      s.status = SubmissionStatus::kWithdrawn;
    } else {
      throw Error(ErrorCode::kParseError, "unknown log event " + kind);
    }
  }
  for (auto& [id, ts] : tasks_) {
    if (ts.task.type() == BenchmarkType::kTestSet) rescore_locked(id);
  }
}

std::size_t Arena::replay_mismatches() const {
  std::shared_lock lock(mu_);
  return replay_mismatches_;
}

SubmissionStatus Arena::status(const std::string& submission_id) const {
  std::shared_lock lock(mu_);
  return submission(submission_id).status;
}

std::vector<eval::ScoreRecord> Arena::records(const std::string& submission_id) const {
  std::shared_lock lock(mu_);
  const SubmissionState& s = submission(submission_id);
  std::vector<eval::ScoreRecord> out = s.records;
  const TaskState& ts = tasks_.at(s.task_id);
  if (auto it = ts.current.find(submission_id); it != ts.current.end()) {
    out.at(0) = it->second;
  }
  return out;
}

Json Arena::submission_view(const std::string& submission_id) const {
  std::shared_lock lock(mu_);
  const SubmissionState& s = submission(submission_id);
  const TaskState& ts = tasks_.at(s.task_id);
  const BenchmarkType type = ts.task.type();
  Json j = {{"submission_id", s.id},
            {"task_id", s.task_id},
            {"status", status_name(s.status)},
            {"submitted_at", format_utc(s.submitted_at)},
            {"division", eval::division_name(s.envelope.division)},
            {"submitter", s.envelope.submitter},
            {"method_description", s.envelope.method_description},
            {"report", eval::to_json(s.report)},
            {"score", nullptr},
            {"concealed_score", nullptr}};
  j["verified"] = s.verified ? Json(*s.verified) : Json(nullptr);
  if (!s.failure.empty()) j["error"] = s.failure;
  for (const eval::ScoreRecord& r : s.records) {
    if (r.concealed) {
      j["concealed_score"] = public_record(r, type);
    } else {
      auto it = ts.current.find(s.id);
      j["score"] = public_record(it != ts.current.end() ? it->second : r, type);
    }
  }
  return j;
}

bool Arena::verify_closed(const std::string& submission_id,
                          const std::string& output_hash) {
  std::unique_lock lock(mu_);
  auto it = submissions_.find(submission_id);
  if (it == submissions_.end()) {
    throw Error(ErrorCode::kUnknownSubmission, submission_id);
  }
  SubmissionState& s = it->second;
  if (s.envelope.division != eval::Division::kClosed) {
    throw Error(ErrorCode::kNotApplicable,
                submission_id + " is an open-division submission");
  }
  if (!s.envelope.regeneration_artifact) {
    throw Error(ErrorCode::kMissingArtifact, submission_id);
  }
  const bool verified = eval::payload_hash(s.envelope.payload) == output_hash;
  s.verified = verified;
  append({{"event", "verify"},
          {"submission_id", submission_id},
          {"output_hash", output_hash},
          {"verified", verified}});
  return verified;
}

void Arena::withdraw(const std::string& submission_id) {
  std::unique_lock lock(mu_);
  auto it = submissions_.find(submission_id);
  if (it == submissions_.end()) {
    throw Error(ErrorCode::kUnknownSubmission, submission_id);
  }
  SubmissionState& s = it->second;
  if (!active(s.status)) {
    throw Error(ErrorCode::kNotApplicable,
                submission_id + " is " + std::string(status_name(s.status)));
  }
  s.status = SubmissionStatus::kWithdrawn;
  append({{"event", "withdraw"}, {"submission_id", submission_id}});
  if (tasks_.at(s.task_id).task.type() == BenchmarkType::kTestSet) {
    rescore_locked(s.task_id);
  }
}

std::vector<LeaderboardEntry> Arena::rescore_test_set(const std::string& task_id) {
  {
    std::unique_lock lock(mu_);
    const TaskState& ts = task_state(task_id);
    if (ts.task.type() != BenchmarkType::kTestSet) {
      throw Error(ErrorCode::kWrongTaskType,
                  task_id + " is a " +
                      std::string(forge::benchmark_type_name(ts.task.type())) + " task");
    }
    rescore_locked(task_id);
  }
  return leaderboard(task_id, LeaderboardQuery{std::nullopt, true});
}

std::vector<LeaderboardEntry> Arena::leaderboard(const std::string& task_id,
                                                 const LeaderboardQuery& query) const {
  std::shared_lock lock(mu_);
  const TaskState& ts = task_state(task_id);
  std::vector<LeaderboardEntry> entries;
  for (const std::string& id : order_) {
    const SubmissionState& s = submissions_.at(id);
    if (s.task_id != task_id || s.status != SubmissionStatus::kScored) continue;
    LeaderboardEntry e;
    e.submission_id = s.id;
    e.submitter = s.envelope.submitter;
    e.division = s.envelope.division;
    e.verified = s.verified.value_or(false);
    e.submitted_at = s.submitted_at;
    for (const eval::ScoreRecord& r : s.records) {
      if (r.concealed) {
        e.concealed_value = r.value;
      } else {
        auto it = ts.current.find(s.id);
        e.value = it != ts.current.end() ? it->second.value : r.value;
      }
    }
    entries.push_back(std::move(e));
  }
  return rank_entries(std::move(entries), ts.task.higher_is_better(), query);
}

Json Arena::leaderboard_json(const std::string& task_id,
                             const LeaderboardQuery& query) const {
  const std::vector<LeaderboardEntry> ranked = leaderboard(task_id, query);
  std::shared_lock lock(mu_);
  return arena::leaderboard_json(task_state(task_id).task, ranked, query);
}

}  // namespace dcbench::arena
