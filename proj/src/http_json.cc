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

#include "gecaug/http_json.h"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "gecaug/error.h"
#include "httplib.h"

namespace gecaug {
namespace {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

ParsedUrl ParseUrl(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) {
    throw Error(ErrorCode::kConfig,
                "only http:// endpoints are supported: '" + url + "'");
  }
  const std::size_t slash = url.find('/', kScheme.size());
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpEndpoint EndpointFromEnv(const char* url_var, const char* token_var) {
  const char* url = std::getenv(url_var);
  if (url == nullptr || *url == '\0') {
    throw Error(ErrorCode::kConfig,
                std::string("environment variable ") + url_var + " is not set");
  }
  HttpEndpoint endpoint;
  endpoint.url = url;
  if (const char* token = std::getenv(token_var)) endpoint.token = token;
  return endpoint;
}

HttpJsonResult PostJsonWithRetry(const HttpEndpoint& endpoint,
                                 const nlohmann::ordered_json& request,
                                 const RetryPolicy& policy) {
  const ParsedUrl url = ParseUrl(endpoint.url);
  const std::string body = request.dump();
  HttpJsonResult result;

  for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
    result.attempts = attempt;
    httplib::Client client(url.scheme_host_port);
    client.set_connection_timeout(endpoint.timeout);
    client.set_read_timeout(endpoint.timeout);
    client.set_write_timeout(endpoint.timeout);
    if (!endpoint.token.empty()) client.set_bearer_token_auth(endpoint.token);

    auto response = client.Post(url.path, body, "application/json");
    bool retry = false;
    if (!response) {
      result.last_status = 0;
      result.error = "transport: " + httplib::to_string(response.error());
      retry = true;
    } else {
      result.last_status = response->status;
      if (response->status >= 200 && response->status < 300) {
        try {
          result.body = nlohmann::json::parse(response->body);
          result.ok = true;
          result.error.clear();
        } catch (const nlohmann::json::exception& e) {
          result.error = std::string("malformed response: ") + e.what();
        }
        return result;
      }
      result.error = "http status " + std::to_string(response->status);
      retry = Retryable(response->status);
    }
    if (!retry) return result;
    if (attempt < policy.max_attempts) {
      const double scale = std::pow(policy.factor, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration_cast<std::chrono::milliseconds>(
          policy.base_delay * scale));
    }
  }
  return result;
}

}  // namespace gecaug
