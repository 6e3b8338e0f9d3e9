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

#include "dcbench/arena/leaderboard.h"

#include <algorithm>
#include <cstdio>
#include <set>

namespace dcbench::arena {

bool EntryOrder::operator()(const LeaderboardEntry& a,
                            const LeaderboardEntry& b) const {
  if (a.value != b.value) {
    return higher_is_better ? a.value > b.value : a.value < b.value;
  }
  if (a.submitted_at != b.submitted_at) return a.submitted_at < b.submitted_at;
  return a.submission_id < b.submission_id;
}

std::vector<LeaderboardEntry> rank_entries(std::vector<LeaderboardEntry> entries,
                                           bool higher_is_better,
                                           const LeaderboardQuery& query) {
  std::erase_if(entries, [&](const LeaderboardEntry& e) {
    if (query.division && e.division != *query.division) return true;
    return e.division == eval::Division::kClosed && !e.verified;
  });
  std::sort(entries.begin(), entries.end(), EntryOrder{higher_is_better});
  if (query.history) return entries;
  std::vector<LeaderboardEntry> best;
  std::set<std::pair<std::string, eval::Division>> seen;
  for (LeaderboardEntry& e : entries) {
    if (seen.insert({e.submitter, e.division}).second) best.push_back(std::move(e));
  }
  return best;
}

std::string display_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Json to_json(const LeaderboardEntry& e, std::size_t rank) {
  Json j = {{"rank", rank},
            {"submission_id", e.submission_id},
            {"submitter", e.submitter},
            {"division", eval::division_name(e.division)},
            {"value", e.value},
            {"display_value", display_value(e.value)},
            {"verified", e.verified},
            {"submitted_at", format_utc(e.submitted_at)}};
  j["concealed_value"] = e.concealed_value ? Json(*e.concealed_value) : Json(nullptr);
  if (e.concealed_value) j["concealed_display_value"] = display_value(*e.concealed_value);
  return j;
}

Json leaderboard_json(const Task& task, const std::vector<LeaderboardEntry>& ranked,
                      const LeaderboardQuery& query) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    entries.push_back(to_json(ranked[i], i + 1));
  }
  return {{"task_id", task.id()},
          {"headline_metric", task.headline_metric()},
          {"metric_direction", task.higher_is_better() ? "higher" : "lower"},
          {"division", query.division ? Json(eval::division_name(*query.division))
                                      : Json("all")},
          {"history", query.history},
          {"entries", entries}};
}

}  // namespace dcbench::arena
