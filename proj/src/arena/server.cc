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

#include "dcbench/arena/server.h"

#include <httplib.h>

#include <charconv>

namespace dcbench::arena {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownTask:
    case ErrorCode::kUnknownSubmission:
      return 404;
    case ErrorCode::kWindowClosed:
      return 403;
    case ErrorCode::kRateLimited:
      return 429;
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidSpec:
      return 400;
    case ErrorCode::kNotApplicable:
    case ErrorCode::kMissingArtifact:
    case ErrorCode::kWrongTaskType:
    case ErrorCode::kDuplicateTaskId:
      return 409;
    case ErrorCode::kValidationFailed:
      return 422;
    default:
      return 500;
  }
}

Json error_body(const Error& e) {
  return {{"error", error_code_name(e.code())}, {"message", e.what()}};
}

std::pair<std::string, int> parse_listen_address(const std::string& address) {
  const std::size_t colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw Error(ErrorCode::kInvalidSpec, "listen address must be host:port");
  }
  int port = -1;
  const char* first = address.data() + colon + 1;
  const char* last = address.data() + address.size();
  auto [ptr, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || ptr != last || port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidSpec, "bad port in " + address);
  }
  return {address.substr(0, colon), port};
}

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, http_status(e.code()), error_body(e));
}

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("request body: ") + e.what());
  }
}

// Runs a handler, mapping library errors to their HTTP status.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
    }
  };
}

LeaderboardQuery query_from(const httplib::Request& req) {
  LeaderboardQuery q;
  if (req.has_param("division")) {
    const std::string d = req.get_param_value("division");
    if (!d.empty() && d != "all") q.division = eval::parse_division(d);
  }
  if (req.has_param("history")) {
    const std::string h = req.get_param_value("history");
    q.history = h == "1" || h == "true" || h == "yes";
  }
  return q;
}

std::string content_type(const std::string& name) {
  if (name.ends_with(".json")) return "application/json";
  if (name.ends_with(".csv")) return "text/csv";
  return "application/octet-stream";
}

}  // namespace

struct Server::Impl {
  explicit Impl(Arena& a) : arena(a) {}
  Arena& arena;
  httplib::Server http;
};

Server::Server(Arena& arena) : impl_(std::make_unique<Impl>(arena)) {
  Arena& a = impl_->arena;
  httplib::Server& s = impl_->http;

  s.Get("/tasks", guarded([&a](const httplib::Request&, httplib::Response& res) {
          Json tasks = Json::array();
          for (const std::string& id : a.task_ids()) tasks.push_back(a.task_summary(id));
          send_json(res, 200, {{"tasks", tasks}});
        }));
  s.Get(R"(/tasks/([^/]+))",
        guarded([&a](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, a.task_detail(req.matches[1]));
        }));
  s.Get(R"(/tasks/([^/]+)/files/(.+))",
        guarded([&a](const httplib::Request& req, httplib::Response& res) {
          const std::string task_id = req.matches[1];
          const std::string name = req.matches[2];
          const auto body = a.public_file(task_id, name);
          if (!body) {
            throw Error(ErrorCode::kUnknownTask,
                        "no participant-visible file " + name + " in " + task_id);
          }
          res.status = 200;
          res.set_content(*body, content_type(name));
        }));
  s.Post(R"(/tasks/([^/]+)/submissions)",
         guarded([&a](const httplib::Request& req, httplib::Response& res) {
           const Receipt r = a.submit(req.matches[1], parse_body(req));
           Json body = to_json(r);
           if (r.status == SubmissionStatus::kRejected) {
             body["error"] = "ValidationFailed";
             send_json(res, 422, body);
           } else {
             send_json(res, 202, body);
           }
         }));
  s.Get(R"(/tasks/([^/]+)/leaderboard)",
        guarded([&a](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, a.leaderboard_json(req.matches[1], query_from(req)));
        }));
  s.Post(R"(/tasks/([^/]+)/verify)",
         guarded([&a](const httplib::Request& req, httplib::Response& res) {
           const std::string task_id = req.matches[1];
           const Json body = parse_body(req);
           if (!body.contains("submission_id") || !body.contains("output_hash")) {
             throw Error(ErrorCode::kParseError,
                         "verify needs submission_id and output_hash");
           }
           const std::string id = body.at("submission_id").get<std::string>();
           if (a.submission_view(id).at("task_id") != task_id) {
             throw Error(ErrorCode::kUnknownSubmission, id + " in task " + task_id);
           }
           const bool ok = a.verify_closed(id, body.at("output_hash").get<std::string>());
           send_json(res, 200, {{"submission_id", id}, {"verified", ok}});
         }));
  s.Post(R"(/tasks/([^/]+)/rescore)",
         guarded([&a](const httplib::Request& req, httplib::Response& res) {
           a.rescore_test_set(req.matches[1]);
           send_json(res, 200, a.leaderboard_json(req.matches[1], {std::nullopt, true}));
         }));
  s.Get(R"(/submissions/([^/]+))",
        guarded([&a](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, a.submission_view(req.matches[1]));
        }));
  s.Post(R"(/submissions/([^/]+)/withdraw)",
         guarded([&a](const httplib::Request& req, httplib::Response& res) {
           a.withdraw(req.matches[1]);
           send_json(res, 200, a.submission_view(req.matches[1]));
         }));
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(Json{{"error", "NotFound"}, {"message", "no such route"}}.dump(),
                      "application/json");
    }
  });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::serve() { return impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace dcbench::arena
