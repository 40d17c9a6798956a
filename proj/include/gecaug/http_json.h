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

#ifndef GECAUG_HTTP_JSON_H_
#define GECAUG_HTTP_JSON_H_

#include <chrono>
#include <string>

#include "json.hpp"

namespace gecaug {

struct HttpEndpoint {
  std::string url;    // http://host[:port][/path]
  std::string token;  // sent as a bearer token when non-empty
  std::chrono::milliseconds timeout{30000};
};

// Reads `url_var` (required) and `token_var` (optional) from the
// environment. Throws kConfig when the URL variable is unset.
HttpEndpoint EndpointFromEnv(const char* url_var, const char* token_var);

// Exponential backoff: attempt k (1-based) waits base_delay * factor^(k-1)
// before attempt k+1.
struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{500};
  double factor = 2.0;
};

struct HttpJsonResult {
  bool ok = false;
  nlohmann::json body;
  int attempts = 0;
  int last_status = 0;  // 0 when no response was received
  std::string error;
};

// POSTs `request` as JSON. Retries on timeouts, connection failures, 429
// and 5xx; other non-2xx statuses and unparseable bodies fail at once.
HttpJsonResult PostJsonWithRetry(const HttpEndpoint& endpoint,
                                 const nlohmann::ordered_json& request,
                                 const RetryPolicy& policy);

}  // namespace gecaug

#endif  // GECAUG_HTTP_JSON_H_
