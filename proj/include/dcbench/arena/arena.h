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

#ifndef DCBENCH_ARENA_ARENA_H_
#define DCBENCH_ARENA_ARENA_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "dcbench/arena/leaderboard.h"
#include "dcbench/arena/task.h"
#include "dcbench/evaluators/engine.h"
#include "dcbench/evaluators/validate.h"

namespace dcbench::arena {

enum class SubmissionStatus { kQueued, kScored, kRejected, kWithdrawn, kFailed };
std::string_view status_name(SubmissionStatus s);

struct Receipt {
  std::string submission_id;
  SubmissionStatus status = SubmissionStatus::kQueued;
  eval::ValidationReport report;
};
Json to_json(const Receipt& r);

using Clock = std::function<Timestamp()>;
Timestamp system_now();

struct ArenaOptions {
  std::filesystem::path data_root;
  int workers = 1;
  Clock clock = system_now;
  // Recompute every logged score during startup replay and count records
  // whose serialization differs.
  bool verify_replay = true;
};

inline constexpr const char* kLogFile = "submissions.jsonl";
inline constexpr const char* kTasksDir = "tasks";

// Score breakdown as shown to participants: fields that would reveal hidden
// truth (per-example human verdicts, true valuation accuracies, which
// repairs hit corrupted examples) are removed.
Json public_record(const eval::ScoreRecord& record, forge::BenchmarkType type);

// The challenge service. All state lives in data_root: tasks/<id>/ bundle
// directories and the append-only submissions.jsonl log. One writer mutex
// serializes intake, commits and rescoring; queries take a shared lock.
// Scoring runs on worker threads and commits in submission order.
class Arena {
 public:
  explicit Arena(ArenaOptions options);
  ~Arena();
  Arena(const Arena&) = delete;
  Arena& operator=(const Arena&) = delete;

  // Copies bundle_dir into data_root/tasks/<id> with a task.json. Throws
  // kDuplicateTaskId, kBundleHashMismatch, kInvalidSpec.
  std::string register_task(const TaskConfig& config,
                            const std::filesystem::path& bundle_dir);

  std::vector<std::string> task_ids() const;
  Json task_summary(const std::string& task_id) const;
  Json task_detail(const std::string& task_id) const;
  std::optional<std::string> public_file(const std::string& task_id,
                                         const std::string& name) const;

  // Validates synchronously. Throws kUnknownTask, kWindowClosed,
  // kRateLimited, kParseError (malformed envelope). Violations give a
  // rejected receipt, which is also logged.
  Receipt submit(const std::string& task_id, const Json& envelope);

  // Participant-facing view. Throws kUnknownSubmission.
  Json submission_view(const std::string& submission_id) const;
  SubmissionStatus status(const std::string& submission_id) const;
  // Full records, operator side.
  std::vector<eval::ScoreRecord> records(const std::string& submission_id) const;

  // Compares the payload hash with an operator-produced output hash. Throws
  // kUnknownSubmission, kNotApplicable (open division), kMissingArtifact.
  bool verify_closed(const std::string& submission_id,
                     const std::string& output_hash);

  // Removes the submission from leaderboards and test-set containment.
  void withdraw(const std::string& submission_id);

  // From-scratch containment and credit recomputation. Throws
  // kUnknownTask, kWrongTaskType.
  std::vector<LeaderboardEntry> rescore_test_set(const std::string& task_id);

  std::vector<LeaderboardEntry> leaderboard(const std::string& task_id,
                                            const LeaderboardQuery& query) const;
  Json leaderboard_json(const std::string& task_id,
                        const LeaderboardQuery& query) const;

  // Blocks until every queued submission is committed.
  void drain();

  // Logged scores whose recomputation during replay did not match.
  std::size_t replay_mismatches() const;

 private:
  struct SubmissionState {
    std::string id;
    std::string task_id;
    Timestamp submitted_at = 0;
    eval::Submission envelope;
    SubmissionStatus status = SubmissionStatus::kQueued;
    eval::ValidationReport report;
    std::vector<eval::ScoreRecord> records;  // as committed
    std::optional<bool> verified;
    std::string failure;
  };
  struct TaskState {
    Task task;
    // Current diluted records by submission id (test-set tasks only).
    std::map<std::string, eval::ScoreRecord> current;
  };
  struct Job {
    std::uint64_t seq = 0;
    std::string submission_id;
  };

  void load_tasks();
  void add_task(Task task);
  void replay();
  void append(const Json& event);
  void enqueue(const std::string& submission_id);
  void worker_loop();
  std::vector<eval::ScoreRecord> compute(const SubmissionState& s) const;
  // Caller holds mu_ exclusively.
  std::vector<eval::ScoreRecord> compute_test_set(const SubmissionState& s) const;
  eval::ContainmentCounts containment(const std::string& task_id) const;
  void rescore_locked(const std::string& task_id);
  const TaskState& task_state(const std::string& task_id) const;
  const SubmissionState& submission(const std::string& id) const;
  std::string next_submission_id() const;

  ArenaOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, TaskState> tasks_;
  std::map<std::string, SubmissionState> submissions_;
  std::vector<std::string> order_;  // submission ids in log order
  std::ofstream log_;
  std::size_t replay_mismatches_ = 0;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::condition_variable commit_cv_;
  std::deque<Job> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t committed_seq_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace dcbench::arena

#endif  // DCBENCH_ARENA_ARENA_H_
