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

#ifndef DCBENCH_ARENA_TASK_H_
#define DCBENCH_ARENA_TASK_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcbench/core/io.h"
#include "dcbench/evaluators/submission.h"
#include "dcbench/forge/bundle.h"

namespace dcbench::arena {

// Microseconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

// "2026-03-01T12:00:00Z", optionally with a fractional second. Throws
// kParseError.
Timestamp parse_utc(std::string_view text);
// Always six fractional digits: "2026-03-01T12:00:00.000000Z".
std::string format_utc(Timestamp t);

struct RateLimit {
  int max_submissions = 0;
  std::int64_t per_seconds = 0;
};

// Operator-side task settings, stored as task.json next to the bundle's
// manifest.json. The file is not listed in the manifest and never served.
struct TaskConfig {
  std::string task_id;
  Timestamp open_at = 0;
  Timestamp close_at = parse_utc("9999-12-31T23:59:59Z");
  std::vector<eval::Division> divisions = {eval::Division::kOpen,
                                           eval::Division::kClosed};
  std::optional<RateLimit> rate_limit;  // per submitter

  void validate() const;  // close_at > open_at, at least one division
  bool accepts(eval::Division d) const;
};

Json to_json(const TaskConfig& c);
TaskConfig task_config_from_json(const Json& j, const std::string& task_id);

inline constexpr const char* kTaskFile = "task.json";

// A registered task: its config plus the fully loaded bundle. The concealed
// problem reference is the bundle's nested hidden bundle, if any.
struct Task {
  TaskConfig config;
  forge::Bundle bundle;

  const std::string& id() const { return config.task_id; }
  forge::BenchmarkType type() const { return forge::type_of(bundle.problem); }
  std::string headline_metric() const;
  bool higher_is_better() const;
  bool has_concealed() const { return bundle.manifest.contains("concealed"); }

  // Participant-facing manifest: hidden file hashes and the concealed
  // pointer removed.
  Json public_manifest() const;
  std::vector<std::string> public_files() const;
  // Contents of a participant-visible file; nullopt for hidden or unlisted
  // names.
  std::optional<std::string> read_public_file(const std::string& name) const;
  // Task summary for listings.
  Json summary() const;
};

// Loads dir/manifest.json (hash-verified) and dir/task.json when present.
Task load_task(const std::filesystem::path& dir, const std::string& task_id);

// Verifies bundle_dir, copies it to tasks_dir/<task_id> and writes task.json
// there. Returns the new directory. Throws kDuplicateTaskId when the target
// exists, kBundleHashMismatch, kInvalidSpec.
std::filesystem::path install_task(const std::filesystem::path& tasks_dir,
                                   const TaskConfig& config,
                                   const std::filesystem::path& bundle_dir);

}  // namespace dcbench::arena

#endif  // DCBENCH_ARENA_TASK_H_
