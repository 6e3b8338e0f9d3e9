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

#include "cli.h"

#include <httplib.h>
#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

#include "dcbench/arena/arena.h"
#include "dcbench/arena/server.h"
#include "dcbench/core/error.h"
#include "dcbench/evaluators/engine.h"
#include "dcbench/evaluators/validate.h"
#include "dcbench/forge/bundle.h"
#include "dcbench/forge/registry.h"

namespace dcbench::cli {

namespace {

namespace fs = std::filesystem;

enum class Format { kJson, kText };

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

std::vector<double> parse_splits(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidSpec, "bad split fraction '" + part + "'");
    }
  }
  if (out.size() != 3) {
    throw Error(ErrorCode::kInvalidSpec, "--splits needs train,validation,test");
  }
  return out;
}

// key=value; the value is read as JSON when it parses, else as a string.
void add_option(Json& options, const std::string& kv) {
  const std::size_t eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::kInvalidSpec, "--option expects key=value, got " + kv);
  }
  const std::string key = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);
  Json parsed = Json::parse(value, nullptr, false);
  options[key] = parsed.is_discarded() ? Json(value) : parsed;
}

eval::Submission read_submission(const fs::path& path) {
  return eval::parse_submission(read_json_file(path));
}

void print_report(const eval::ValidationReport& report, Format format,
                  std::ostream& out) {
  if (format == Format::kJson) {
    out << eval::to_json(report).dump() << '\n';
    return;
  }
  if (report.ok()) out << "ok\n";
  for (const eval::Violation& v : report.violations) {
    out << "violation " << v.code << ": " << v.detail << '\n';
  }
}

void print_records(const std::vector<eval::ScoreRecord>& records, Format format,
                   std::ostream& out) {
  for (const eval::ScoreRecord& r : records) {
    if (format == Format::kJson) {
      out << eval::to_json(r).dump() << '\n';
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", r.value);
      out << r.metric_name << ' ' << buf << (r.concealed ? " concealed" : " public")
          << '\n';
    }
  }
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void print_leaderboard_text(const Json& board, std::ostream& out) {
  const std::vector<std::string> header = {"rank",  "submission", "submitter",
                                           "division", "value", "concealed",
                                           "verified", "submitted_at"};
  std::vector<std::vector<std::string>> rows;
  for (const Json& e : board.at("entries")) {
    rows.push_back({std::to_string(e.at("rank").get<int>()),
                    e.at("submission_id").get<std::string>(),
                    e.at("submitter").get<std::string>(),
                    e.at("division").get<std::string>(),
                    e.at("display_value").get<std::string>(),
                    e.contains("concealed_display_value")
                        ? e.at("concealed_display_value").get<std::string>()
                        : "-",
                    e.at("verified").get<bool>() ? "yes" : "no",
                    e.at("submitted_at").get<std::string>()});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  out << board.at("task_id").get<std::string>() << " ("
      << board.at("headline_metric").get<std::string>() << ", "
      << board.at("metric_direction").get<std::string>() << " is better)\n";
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      s += c + 1 < cells.size() ? pad(cells[c], width[c] + 2) : cells[c];
    }
    out << s << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
}

// Surfaces a non-2xx response and returns the exit code for it.
int http_failure(const httplib::Result& res, std::ostream& err) {
  if (!res) {
    err << "connection error: " << httplib::to_string(res.error()) << '\n';
    return kExitError;
  }
  err << "HTTP " << res->status << ": " << res->body << '\n';
  return kExitError;
}

int cmd_forge(const std::string& type_name, const forge::ForgeSpec& spec,
              const Json& options, const fs::path& out_dir, Format format,
              std::ostream& out) {
  const forge::BenchmarkType type = forge::parse_benchmark_type(type_name);
  const std::string hash = forge::forge_bundle(type, spec, options, out_dir);
  if (format == Format::kJson) {
    out << Json{{"manifest_hash", hash}, {"out", out_dir.string()},
                {"type", type_name}}
               .dump()
        << '\n';
  } else {
    out << hash << '\n';
  }
  return kExitOk;
}

int cmd_validate(const fs::path& bundle_dir, const fs::path& submission_path,
                 Format format, std::ostream& out) {
  const forge::Bundle bundle = forge::load_bundle(bundle_dir);
  const eval::ValidationReport report =
      eval::validate(read_submission(submission_path), bundle.problem);
  print_report(report, format, out);
  return report.ok() ? kExitOk : kExitViolations;
}

int cmd_eval(const fs::path& bundle_dir, const fs::path& submission_path,
             Format format, std::ostream& out) {
  const forge::Bundle bundle = forge::load_bundle(bundle_dir);
  const eval::Submission submission = read_submission(submission_path);
  const eval::ValidationReport report = eval::validate(submission, bundle.problem);
  if (!report.ok()) {
    print_report(report, format, out);
    return kExitViolations;
  }
  print_records(eval::score_submission(bundle.problem, submission,
                                       eval::context_for(bundle)),
                format, out);
  return kExitOk;
}

int cmd_register(const fs::path& data_root, const std::string& task_id,
                 const fs::path& bundle_dir, const std::string& open_at,
                 const std::string& close_at,
                 const std::vector<std::string>& divisions, Format format,
                 std::ostream& out) {
  arena::TaskConfig config;
  config.task_id = task_id;
  if (!open_at.empty()) config.open_at = arena::parse_utc(open_at);
  if (!close_at.empty()) config.close_at = arena::parse_utc(close_at);
  if (!divisions.empty()) {
    config.divisions.clear();
    for (const std::string& d : divisions) {
      config.divisions.push_back(eval::parse_division(d));
    }
  }
  const fs::path dest =
      arena::install_task(data_root / arena::kTasksDir, config, bundle_dir);
  if (format == Format::kJson) {
    out << Json{{"task_id", task_id}, {"path", dest.string()}}.dump() << '\n';
  } else {
    out << task_id << ' ' << dest.string() << '\n';
  }
  return kExitOk;
}

int cmd_serve(const fs::path& data_root, const std::string& listen, int workers,
              std::ostream& out, std::ostream& err) {
  const auto [host, port] = arena::parse_listen_address(listen);

  // Signals are taken synchronously by a watcher thread; every thread
  // created after this point inherits the blocked mask.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  arena::ArenaOptions options;
  options.data_root = data_root;
  options.workers = workers;
  arena::Arena a(options);
  if (a.replay_mismatches() > 0) {
    err << "warning: " << a.replay_mismatches()
        << " logged scores did not recompute identically\n";
  }
  arena::Server server(a);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    err << "cannot listen on " << listen << '\n';
    return kExitError;
  }
  out << Json{{"listening", host + ":" + std::to_string(bound)},
              {"tasks", a.task_ids()}}
             .dump()
      << std::endl;

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    const timespec tick{0, 100 * 1000 * 1000};
    while (!done.load()) {
      if (sigtimedwait(&set, nullptr, &tick) > 0) {
        server.stop();
        return;
      }
    }
  });
  const bool ok = server.serve();
  done = true;
  watcher.join();
  a.drain();
  return ok || !server.running() ? kExitOk : kExitError;
}

int cmd_submit(const std::string& url, const std::string& task_id,
               const fs::path& file, double wait_seconds, Format format,
               std::ostream& out, std::ostream& err) {
  const std::string body = read_file(file);
  httplib::Client client(url);
  client.set_read_timeout(120, 0);
  auto res = client.Post("/tasks/" + task_id + "/submissions", body, "application/json");
  if (!res) return http_failure(res, err);
  if (res->status == 422) {
    out << res->body << '\n';
    return kExitViolations;
  }
  if (res->status != 202) return http_failure(res, err);
  Json receipt = Json::parse(res->body);
  Json shown = receipt;
  if (wait_seconds > 0) {
    const std::string id = receipt.at("submission_id").get<std::string>();
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(wait_seconds);
    for (;;) {
      auto poll = client.Get("/submissions/" + id);
      if (!poll || poll->status != 200) return http_failure(poll, err);
      shown = Json::parse(poll->body);
      if (shown.at("status") != "queued") break;
      if (std::chrono::steady_clock::now() > deadline) {
        err << "timed out waiting for " << id << '\n';
        return kExitError;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  }
  if (format == Format::kJson) {
    out << shown.dump() << '\n';
  } else {
    out << shown.at("submission_id").get<std::string>() << ' '
        << shown.at("status").get<std::string>();
    if (shown.contains("score") && !shown.at("score").is_null()) {
      out << ' ' << shown.at("score").at("metric_name").get<std::string>() << ' '
          << arena::display_value(shown.at("score").at("value").get<double>());
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_leaderboard(const std::string& url, const std::string& task_id,
                    const std::string& division, bool history, Format format,
                    std::ostream& out, std::ostream& err) {
  httplib::Client client(url);
  httplib::Params params;
  if (!division.empty()) params.emplace("division", division);
  if (history) params.emplace("history", "true");
  auto res = client.Get("/tasks/" + task_id + "/leaderboard", params,
                        httplib::Headers{});
  if (!res || res->status != 200) return http_failure(res, err);
  if (format == Format::kJson) {
    out << res->body << '\n';
  } else {
    print_leaderboard_text(Json::parse(res->body), out);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-centric benchmark harness: forge problems, score submissions, "
               "run the challenge service."};
  app.set_version_flag("--version", std::string(DCBENCH_VERSION));
  app.require_subcommand(1);
  std::string format_name = "json";
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  // forge
  auto* forge_cmd = app.add_subcommand("forge", "Forge a problem bundle");
  std::string forge_type;
  forge::ForgeSpec spec;
  std::string splits;
  fs::path forge_out;
  std::vector<std::string> option_kvs;
  std::string options_json;
  forge_cmd->add_option("type", forge_type,
                        "training_set | test_set | selection | debugging | "
                        "valuation | slicing")
      ->required();
  forge_cmd->add_option("--seed", spec.seed, "Forge seed");
  forge_cmd->add_option("--num-classes", spec.num_classes);
  forge_cmd->add_option("--per-class", spec.per_class_count);
  forge_cmd->add_option("--dim", spec.dim);
  forge_cmd->add_option("--spread", spec.cluster_spread);
  forge_cmd->add_option("--mean-radius", spec.mean_radius);
  forge_cmd->add_option("--splits", splits, "train,validation,test fractions");
  forge_cmd->add_option("--option", option_kvs, "Type option key=value (repeatable)");
  forge_cmd->add_option("--options-json", options_json, "Type options as a JSON object");
  forge_cmd->add_option("--out", forge_out, "Bundle directory")->required();

  // validate / eval
  auto* validate_cmd = app.add_subcommand("validate", "Validate a submission locally");
  auto* eval_cmd = app.add_subcommand("eval", "Validate and score a submission locally");
  fs::path bundle_dir, submission_path;
  for (CLI::App* c : {validate_cmd, eval_cmd}) {
    c->add_option("bundle", bundle_dir, "Bundle directory (with hidden/)")->required();
    c->add_option("submission", submission_path, "Submission JSON file")->required();
  }

  // register
  auto* register_cmd =
      app.add_subcommand("register", "Install a bundle as a task under a data root");
  std::string data_root = env_or("DCBENCH_DATA_ROOT", "");
  std::string task_id, open_at, close_at;
  std::vector<std::string> divisions;
  fs::path register_bundle;
  register_cmd->add_option("--data-root", data_root, "Defaults to $DCBENCH_DATA_ROOT");
  register_cmd->add_option("--task-id", task_id)->required();
  register_cmd->add_option("--open-at", open_at, "UTC, e.g. 2026-01-01T00:00:00Z");
  register_cmd->add_option("--close-at", close_at, "UTC");
  register_cmd->add_option("--division", divisions, "open and/or closed (repeatable)");
  register_cmd->add_option("bundle", register_bundle)->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the challenge service");
  std::string listen = "127.0.0.1:8080";
  int workers = 1;
  serve_cmd->add_option("--data-root", data_root, "Defaults to $DCBENCH_DATA_ROOT");
  serve_cmd->add_option("--listen", listen, "host:port (port 0 picks one)");
  serve_cmd->add_option("--workers", workers, "Scoring threads")
      ->check(CLI::PositiveNumber);

  // submit / leaderboard
  std::string url = env_or("DCBENCH_URL", "http://127.0.0.1:8080");
  auto* submit_cmd = app.add_subcommand("submit", "Submit to a running service");
  fs::path submit_file;
  double wait_seconds = 0.0;
  submit_cmd->add_option("--url", url, "Defaults to $DCBENCH_URL");
  submit_cmd->add_option("--wait", wait_seconds, "Poll up to this many seconds for the score");
  submit_cmd->add_option("task", task_id)->required();
  submit_cmd->add_option("file", submit_file)->required();

  auto* board_cmd = app.add_subcommand("leaderboard", "Show a task leaderboard");
  std::string division;
  bool history = false;
  board_cmd->add_option("--url", url, "Defaults to $DCBENCH_URL");
  board_cmd->add_option("--division", division)
      ->check(CLI::IsMember({"open", "closed", "all"}));
  board_cmd->add_flag("--history", history, "Every entry, not just each submitter's best");
  board_cmd->add_option("task", task_id)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << DCBENCH_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << '\n';
    return kExitError;
  }
  const Format format = format_name == "text" ? Format::kText : Format::kJson;

  try {
    if (forge_cmd->parsed()) {
      if (!splits.empty()) {
        const std::vector<double> f = parse_splits(splits);
        spec.splits = {f[0], f[1], f[2]};
      }
      Json options = Json::object();
      if (!options_json.empty()) {
        options = Json::parse(options_json, nullptr, false);
        if (options.is_discarded() || !options.is_object()) {
          throw Error(ErrorCode::kInvalidSpec, "--options-json must be a JSON object");
        }
      }
      for (const std::string& kv : option_kvs) add_option(options, kv);
      return cmd_forge(forge_type, spec, options, forge_out, format, out);
    }
    if (validate_cmd->parsed()) return cmd_validate(bundle_dir, submission_path, format, out);
    if (eval_cmd->parsed()) return cmd_eval(bundle_dir, submission_path, format, out);
    if (register_cmd->parsed() || serve_cmd->parsed()) {
      if (data_root.empty()) {
        throw Error(ErrorCode::kInvalidSpec, "no data root: pass --data-root or set "
                                             "DCBENCH_DATA_ROOT");
      }
      if (register_cmd->parsed()) {
        return cmd_register(data_root, task_id, register_bundle, open_at, close_at,
                            divisions, format, out);
      }
      return cmd_serve(data_root, listen, workers, out, err);
    }
    if (submit_cmd->parsed()) {
      return cmd_submit(url, task_id, submit_file, wait_seconds, format, out, err);
    }
    if (board_cmd->parsed()) {
      return cmd_leaderboard(url, task_id, division, history, format, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace dcbench::cli
