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

#include "dcbench/arena/task.h"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "dcbench/core/error.h"

namespace dcbench::arena {

namespace fs = std::filesystem;
namespace chr = std::chrono;

Timestamp parse_utc(std::string_view text) {
  const std::string s(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi,
                  &sec, &consumed) != 6) {
    throw Error(ErrorCode::kParseError, "bad UTC timestamp '" + s + "'");
  }
  std::size_t pos = static_cast<std::size_t>(consumed);
  std::int64_t micros = 0;
  if (pos < s.size() && s[pos] == '.') {
    int digits = 0;
    for (++pos; pos < s.size() && s[pos] >= '0' && s[pos] <= '9'; ++pos) {
      if (digits < 6) {
        micros = micros * 10 + (s[pos] - '0');
        ++digits;
      }
    }
    for (; digits < 6; ++digits) micros *= 10;
  }
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(mo)},
                                chr::day{static_cast<unsigned>(d)}};
  if (pos + 1 != s.size() || s[pos] != 'Z' || !ymd.ok() || h > 23 || mi > 59 ||
      sec > 60) {
    throw Error(ErrorCode::kParseError, "bad UTC timestamp '" + s + "'");
  }
  const auto day_micros = chr::duration_cast<chr::microseconds>(
      chr::sys_days{ymd}.time_since_epoch());
  return day_micros.count() +
         ((static_cast<std::int64_t>(h) * 60 + mi) * 60 + sec) * 1000000 + micros;
}

std::string format_utc(Timestamp t) {
  const chr::sys_time<chr::microseconds> tp{chr::microseconds{t}};
  const auto day = chr::floor<chr::days>(tp);
  const chr::year_month_day ymd{day};
  const std::int64_t rest = (tp - day).count();
  const std::int64_t secs = rest / 1000000;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(secs / 3600),
                static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60),
                static_cast<int>(rest % 1000000));
  return buf;
}

void TaskConfig::validate() const {
  if (task_id.empty()) throw Error(ErrorCode::kInvalidSpec, "empty task id");
  if (close_at <= open_at) {
    throw Error(ErrorCode::kInvalidSpec, "task " + task_id + ": close_at <= open_at");
  }
  if (divisions.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "task " + task_id + " has no divisions");
  }
  if (rate_limit && (rate_limit->max_submissions < 1 || rate_limit->per_seconds < 1)) {
    throw Error(ErrorCode::kInvalidSpec, "task " + task_id + ": bad rate limit");
  }
}

bool TaskConfig::accepts(eval::Division d) const {
  return std::find(divisions.begin(), divisions.end(), d) != divisions.end();
}

Json to_json(const TaskConfig& c) {
  Json divisions = Json::array();
  for (eval::Division d : c.divisions) divisions.push_back(eval::division_name(d));
  Json j = {{"task_id", c.task_id},
            {"open_at", format_utc(c.open_at)},
            {"close_at", format_utc(c.close_at)},
            {"divisions", divisions}};
  if (c.rate_limit) {
    j["rate_limit"] = {{"max_submissions", c.rate_limit->max_submissions},
                       {"per_seconds", c.rate_limit->per_seconds}};
  }
  return j;
}

TaskConfig task_config_from_json(const Json& j, const std::string& task_id) {
  TaskConfig c;
  c.task_id = task_id;
  try {
    if (j.contains("task_id") && j.at("task_id").get<std::string>() != task_id) {
      throw Error(ErrorCode::kInvalidSpec,
                  "task.json names " + j.at("task_id").get<std::string>() +
                      " but directory is " + task_id);
    }
    if (j.contains("open_at")) c.open_at = parse_utc(j.at("open_at").get<std::string>());
    if (j.contains("close_at")) {
      c.close_at = parse_utc(j.at("close_at").get<std::string>());
    }
    if (j.contains("divisions")) {
      c.divisions.clear();
      for (const Json& d : j.at("divisions")) {
        c.divisions.push_back(eval::parse_division(d.get<std::string>()));
      }
    }
    if (j.contains("rate_limit") && !j.at("rate_limit").is_null()) {
      c.rate_limit = RateLimit{j.at("rate_limit").at("max_submissions").get<int>(),
                               j.at("rate_limit").at("per_seconds").get<std::int64_t>()};
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("task.json: ") + e.what());
  }
  c.validate();
  return c;
}

std::string Task::headline_metric() const {
  return bundle.manifest.at("headline_metric").get<std::string>();
}

bool Task::higher_is_better() const {
  return bundle.manifest.at("metric_direction").get<std::string>() == "higher";
}

Json Task::public_manifest() const {
  Json m = bundle.manifest;
  m.erase("concealed");
  Json files = Json::object();
  for (const auto& [rel, hash] : bundle.manifest.at("files").items()) {
    if (!forge::is_hidden_path(rel)) files[rel] = hash;
  }
  m["files"] = files;
  return m;
}

std::vector<std::string> Task::public_files() const {
  return forge::public_files(bundle.manifest);
}

std::optional<std::string> Task::read_public_file(const std::string& name) const {
  if (name == "manifest.json") return public_manifest().dump(2) + "\n";
  const std::vector<std::string> files = public_files();
  if (std::find(files.begin(), files.end(), name) == files.end()) return std::nullopt;
  return read_file(bundle.root / name);
}

Json Task::summary() const {
  Json j = to_json(config);
  j["benchmark_type"] = forge::benchmark_type_name(type());
  j["headline_metric"] = headline_metric();
  j["metric_direction"] = bundle.manifest.at("metric_direction");
  j["manifest_hash"] = bundle.manifest_hash;
  j["concealed"] = has_concealed();
  return j;
}

Task load_task(const fs::path& dir, const std::string& task_id) {
  Task t;
  const fs::path config_path = dir / kTaskFile;
  t.config = fs::exists(config_path)
                 ? task_config_from_json(read_json_file(config_path), task_id)
                 : [&] {
                     TaskConfig c;
                     c.task_id = task_id;
                     c.validate();
                     return c;
                   }();
  t.bundle = forge::load_bundle(dir);
  return t;
}

fs::path install_task(const fs::path& tasks_dir, const TaskConfig& config,
                      const fs::path& bundle_dir) {
  config.validate();
  const fs::path dest = tasks_dir / config.task_id;
  if (fs::exists(dest)) throw Error(ErrorCode::kDuplicateTaskId, config.task_id);
  forge::load_bundle(bundle_dir);  // verifies every hash before copying
  fs::create_directories(tasks_dir);
  fs::copy(bundle_dir, dest, fs::copy_options::recursive);
  write_json_file(dest / kTaskFile, to_json(config));
  return dest;
}

}  // namespace dcbench::arena
