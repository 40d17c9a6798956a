// Copyright 2026 The gecaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GECAUG_TESTS_SUPPORT_FAKE_SERVER_H_
#define GECAUG_TESTS_SUPPORT_FAKE_SERVER_H_

#include <string>
#include <thread>

#include "httplib.h"

namespace gecaug::testing {

// httplib server on an ephemeral localhost port, running on its own thread
// for the lifetime of the object. Register handlers on `server` before
// calling Start().
class FakeServer {
 public:
  FakeServer() = default;
  FakeServer(const FakeServer&) = delete;
  FakeServer& operator=(const FakeServer&) = delete;
  ~FakeServer() {
    server.stop();
    if (thread_.joinable()) thread_.join();
  }

  void Start() {
    port_ = server.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  std::string Url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  httplib::Server server;

 private:
  int port_ = 0;
  std::thread thread_;
};

}  // namespace gecaug::testing

#endif  // GECAUG_TESTS_SUPPORT_FAKE_SERVER_H_
