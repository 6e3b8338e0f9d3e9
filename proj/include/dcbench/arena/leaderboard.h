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

#ifndef DCBENCH_ARENA_LEADERBOARD_H_
#define DCBENCH_ARENA_LEADERBOARD_H_

#include <optional>
#include <string>
#include <vector>

#include "dcbench/arena/task.h"
#include "dcbench/core/io.h"
#include "dcbench/evaluators/submission.h"

namespace dcbench::arena {

struct LeaderboardEntry {
  std::string submission_id;
  std::string submitter;
  eval::Division division = eval::Division::kOpen;
  double value = 0.0;
  std::optional<double> concealed_value;
  bool verified = false;
  Timestamp submitted_at = 0;

  friend bool operator==(const LeaderboardEntry&, const LeaderboardEntry&) = default;
};

// Strict weak order over (value in the metric's direction, earlier
// submitted_at, smaller submission_id). Total as long as submission ids are
// unique.
struct EntryOrder {
  bool higher_is_better = true;
  bool operator()(const LeaderboardEntry& a, const LeaderboardEntry& b) const;
};

struct LeaderboardQuery {
  std::optional<eval::Division> division;  // nullopt: both
  bool history = false;                    // false: best entry per submitter
};

// Drops unverified closed entries, sorts, and keeps the best entry of each
// (submitter, division) unless history is set.
std::vector<LeaderboardEntry> rank_entries(std::vector<LeaderboardEntry> entries,
                                           bool higher_is_better,
                                           const LeaderboardQuery& query);

// "0.9100" style, four decimals.
std::string display_value(double v);

Json to_json(const LeaderboardEntry& e, std::size_t rank);
Json leaderboard_json(const Task& task, const std::vector<LeaderboardEntry>& ranked,
                      const LeaderboardQuery& query);

}  // namespace dcbench::arena

#endif  // DCBENCH_ARENA_LEADERBOARD_H_
