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
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <sstream>
#include <thread>

#include "cli.h"
#include "dcbench/arena/arena.h"
#include "dcbench/arena/server.h"
#include "dcbench/core/io.h"
#include "dcbench/evaluators/evaluators.h"
#include "dcbench/forge/bundle.h"
#include "test_util.h"

namespace dcbench::cli {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<Json> json_lines(const std::string& text) {
  std::vector<Json> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(Json::parse(line));
  }
  return lines;
}

std::string write_submission(const TempDir& dir, const std::string& name, const Json& envelope) {
  const fs::path p = dir / name;
  write_file(p, envelope.dump());
  return p.string();
}

Json selection_envelope(const std::string& task, std::vector<std::string> ids) {
  return {{"task_id", task}, {"division", "open"}, {"submitter", "cli"},
          {"method_description", "first ids"}, {"payload", {{"selected_ids", ids}}}};
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
  EXPECT_EQ(run_cli({"forge", "--help"}).code, kExitOk);
  EXPECT_EQ(run_cli({}).code, kExitError);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitError);
  EXPECT_EQ(run_cli({"--version"}).code, kExitOk);
}

TEST(Cli, ForgeIsDeterministic) {
  TempDir dir;
  const Result a = run_cli({"forge", "selection", "--seed", "4", "--per-class", "40", "--out", (dir / "a").string()});
  const Result b = run_cli({"forge", "selection", "--seed", "4", "--per-class", "40", "--out", (dir / "b").string()});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(Json::parse(a.out).at("manifest_hash"), Json::parse(b.out).at("manifest_hash"));
  EXPECT_EQ(read_file(dir / "a" / "pool.csv"), read_file(dir / "b" / "pool.csv"));

  const Result c = run_cli({"forge", "selection", "--seed", "5", "--per-class", "40", "--out", (dir / "c").string()});
  EXPECT_NE(Json::parse(a.out).at("manifest_hash"), Json::parse(c.out).at("manifest_hash"));
}

TEST(Cli, ForgeRejectsBadSpecs) {
  TempDir dir;
  const Result r = run_cli({"forge", "selection", "--splits", "0.5,0.5,0.5", "--out", (dir / "x").string()});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_EQ(run_cli({"forge", "nope", "--out", (dir / "y").string()}).code, kExitError);
  EXPECT_EQ(run_cli({"forge", "slicing", "--option", "k=banana", "--out", (dir / "z").string()}).code,
            kExitError);
  EXPECT_EQ(run_cli({"forge", "selection", "--option", "novalue", "--out", (dir / "w").string()}).code,
            kExitError);
}

struct SelectionBundle {
  TempDir dir;
  fs::path bundle;
  forge::Bundle loaded;
  const forge::SelectionProblem* problem = nullptr;

  SelectionBundle() {
    bundle = dir / "sel";
    const Result r = run_cli({"forge", "selection", "--seed", "2", "--option", "budget=600",
                              "--out", bundle.string()});
    if (r.code != kExitOk) throw std::runtime_error(r.err);
    loaded = forge::load_bundle(bundle);
    problem = &std::get<forge::SelectionProblem>(loaded.problem);
  }
};

TEST(Cli, EvalOfFullPoolEqualsTrainingSetValue) {
  SelectionBundle s;
  const auto& p = *s.problem;
  const std::string file = write_submission(s.dir, "full.json", selection_envelope("sel", p.pool.ids()));
  const Result r = run_cli({"eval", s.bundle.string(), file});
  ASSERT_EQ(r.code, kExitOk) << r.err << r.out;
  const std::vector<Json> lines = json_lines(r.out);
  ASSERT_FALSE(lines.empty());
  const eval::ScoreRecord local = eval::score_record_from_json(lines[0]);
  EXPECT_FALSE(local.concealed);
  const eval::ScoreRecord direct = eval::score_with_suite(p.suite, p.pool, p.hidden_test, "accuracy");
  EXPECT_EQ(local.value, direct.value);

  // Byte-identical stdout across runs.
  EXPECT_EQ(run_cli({"eval", s.bundle.string(), file}).out, r.out);
  const Result text = run_cli({"--format", "text", "eval", s.bundle.string(), file});
  EXPECT_EQ(text.code, kExitOk);
  EXPECT_NE(text.out.find("accuracy"), std::string::npos);
}

TEST(Cli, ValidationViolationsExitTwo) {
  TempDir dir;
  const fs::path bundle = dir / "sel";
  ASSERT_EQ(run_cli({"forge", "selection", "--out", bundle.string()}).code, kExitOk);
  const forge::Bundle b = forge::load_bundle(bundle);
  const auto& p = std::get<forge::SelectionProblem>(b.problem);
  std::vector<std::string> ids = p.pool.ids();
  ids.resize(p.budget + 1);
  const std::string file = write_submission(dir, "over.json", selection_envelope("sel", ids));
  for (const std::string cmd : {"validate", "eval"}) {
    const Result r = run_cli({cmd, bundle.string(), file});
    EXPECT_EQ(r.code, kExitViolations) << cmd;
    EXPECT_NE(r.out.find(eval::kBudgetExceeded), std::string::npos) << cmd << r.out;
  }
  ids.resize(p.budget);
  const std::string ok = write_submission(dir, "ok.json", selection_envelope("sel", ids));
  EXPECT_EQ(run_cli({"validate", bundle.string(), ok}).code, kExitOk);
  EXPECT_EQ(run_cli({"eval", bundle.string(), (dir / "missing.json").string()}).code, kExitError);
}

struct InProcessService {
  TempDir dir;
  std::unique_ptr<arena::Arena> arena;
  std::unique_ptr<arena::Server> server;
  std::thread thread;
  std::string url;

  explicit InProcessService(const fs::path& bundle) {
    const Result reg = run_cli({"register", "--data-root", (dir / "root").string(), "--task-id", "sel",
                                bundle.string()});
    if (reg.code != kExitOk) throw std::runtime_error(reg.err);
    arena::ArenaOptions o;
    o.data_root = dir / "root";
    o.workers = 1;
    arena = std::make_unique<arena::Arena>(o);
    server = std::make_unique<arena::Server>(*arena);
    const int port = server->bind("127.0.0.1", 0);
    url = "http://127.0.0.1:" + std::to_string(port);
    thread = std::thread([this] { server->serve(); });
    while (!server->running()) std::this_thread::yield();
  }
  ~InProcessService() {
    server->stop();
    thread.join();
  }
};

TEST(Cli, SubmitAndLeaderboardAgainstService) {
  SelectionBundle s;
  InProcessService svc(s.bundle);
  std::vector<std::string> ids = s.problem->pool.ids();
  ids.resize(100);
  const std::string file = write_submission(s.dir, "sub.json", selection_envelope("sel", ids));

  const Result sub = run_cli({"submit", "--url", svc.url, "--wait", "120", "sel", file});
  ASSERT_EQ(sub.code, kExitOk) << sub.err;
  const Json view = Json::parse(sub.out);
  EXPECT_EQ(view.at("status"), "scored");

  // The arena's public score equals local evaluation of the same file.
  const Result local = run_cli({"eval", s.bundle.string(), file});
  ASSERT_EQ(local.code, kExitOk);
  EXPECT_EQ(view.at("score").at("value"), json_lines(local.out)[0].at("value"));

  const Result board = run_cli({"leaderboard", "--url", svc.url, "sel"});
  ASSERT_EQ(board.code, kExitOk) << board.err;
  const Json entries = Json::parse(board.out).at("entries");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].at("submitter"), "cli");
  const Result table = run_cli({"--format", "text", "leaderboard", "--url", svc.url, "--history", "sel"});
  EXPECT_EQ(table.code, kExitOk);
  EXPECT_NE(table.out.find("cli"), std::string::npos);

  const Result missing = run_cli({"leaderboard", "--url", svc.url, "nope"});
  EXPECT_EQ(missing.code, kExitError);
  EXPECT_NE(missing.err.find("404"), std::string::npos) << missing.err;

  std::vector<std::string> over = s.problem->pool.ids();
  over.push_back("x-not-there");
  const std::string bad = write_submission(s.dir, "bad.json", selection_envelope("sel", over));
  const Result rejected = run_cli({"submit", "--url", svc.url, "sel", bad});
  EXPECT_EQ(rejected.code, kExitViolations) << rejected.err;

  EXPECT_EQ(run_cli({"submit", "--url", "http://127.0.0.1:1", "sel", file}).code, kExitError);
}

TEST(Cli, RegisterRequiresDataRoot) {
  SelectionBundle s;
  unsetenv("DCBENCH_DATA_ROOT");
  EXPECT_EQ(run_cli({"register", "--task-id", "x", s.bundle.string()}).code, kExitError);
}

// Runs the real binary and stops it with SIGTERM.
TEST(Cli, ServeSubprocessStopsOnSigterm) {
  SelectionBundle s;
  const fs::path root = s.dir / "root";
  ASSERT_EQ(run_cli({"register", "--data-root", root.string(), "--task-id", "sel", s.bundle.string()}).code,
            kExitOk);
  int pipefd[2];
  ASSERT_EQ(pipe(pipefd), 0);
  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    execl(DCBENCH_BINARY, DCBENCH_BINARY, "serve", "--data-root", root.c_str(), "--listen",
          "127.0.0.1:0", static_cast<char*>(nullptr));
    _exit(127);
  }
  close(pipefd[1]);
  std::string line;
  char c;
  while (read(pipefd[0], &c, 1) == 1 && c != '\n') line.push_back(c);
  close(pipefd[0]);
  ASSERT_FALSE(line.empty());
  const Json ready = Json::parse(line);
  EXPECT_EQ(ready.at("tasks"), Json::array({"sel"}));
  const std::string url = "http://" + ready.at("listening").get<std::string>();
  const Result board = run_cli({"leaderboard", "--url", url, "sel"});
  EXPECT_EQ(board.code, kExitOk) << board.err;

  ASSERT_EQ(kill(pid, SIGTERM), 0);
  int status = 0;
  ASSERT_EQ(waitpid(pid, &status, 0), pid);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

}  // namespace
}  // namespace dcbench::cli
