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

#ifndef DCBENCH_ARENA_SERVER_H_
#define DCBENCH_ARENA_SERVER_H_

#include <memory>
#include <string>

#include "dcbench/arena/arena.h"
#include "dcbench/core/error.h"

namespace dcbench::arena {

int http_status(ErrorCode code);
// {"error": "<CodeName>", "message": "..."}
Json error_body(const Error& e);

// JSON HTTP API over an Arena. Participant routes never serve hidden/
// files or full score breakdowns; /verify and /rescore are operator routes.
class Server {
 public:
  explicit Server(Arena& arena);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds host:port (0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  bool serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "host:port" → (host, port). Throws kInvalidSpec.
std::pair<std::string, int> parse_listen_address(const std::string& address);

}  // namespace dcbench::arena

#endif  // DCBENCH_ARENA_SERVER_H_
