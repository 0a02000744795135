// Copyright 2026 The absa-promptkit Authors.
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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "absa/backend.h"

namespace absa {
namespace {

using nlohmann::json;

httplib::Client MakeClient(const HttpEndpoint& endpoint) {
  httplib::Client client(endpoint.base_url);
  const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

TransportError::Kind KindOf(httplib::Error e) {
  switch (e) {
    case httplib::Error::Read:
    case httplib::Error::Write:
    case httplib::Error::ConnectionTimeout:
      return TransportError::Kind::kTimeout;
    default:
      return TransportError::Kind::kConnection;
  }
}

json ParseBody(const std::string& body, const std::string& example_id) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw TransportError(TransportError::Kind::kMalformed, example_id,
                         std::string("malformed response body: ") + e.what());
  }
  if (!j.is_object()) {
    throw TransportError(TransportError::Kind::kMalformed, example_id,
                         "response body is not a JSON object");
  }
  return j;
}

}  // namespace

HttpBackend::HttpBackend(HttpEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  if (endpoint_.max_retries < 0) {
    throw ValidationError("max_retries must be non-negative");
  }
}

std::string HttpBackend::Describe() const { return "http:" + endpoint_.base_url; }

BackendResponse HttpBackend::Call(const BackendRequest& request) const {
  const bool fill = request.kind == RequestKind::kFillMask;
  const std::string path = fill ? "/fill-mask" : "/generate";
  json body;
  if (fill) {
    body = {{"input", request.input}, {"candidates", request.candidate_words}};
  } else {
    body = {{"input", request.input},
            {"max_new_units", request.max_output_units}};
  }
  const std::string payload = body.dump();

  const auto start = std::chrono::steady_clock::now();
  httplib::Client client = MakeClient(endpoint_);
  double backoff = endpoint_.backoff_ms;
  for (int attempt = 0;; ++attempt) {
    auto result = client.Post(path, payload, "application/json");
    const bool last = attempt >= endpoint_.max_retries;
    if (!result) {
      if (last) {
        throw TransportError(KindOf(result.error()), request.example_id,
                             "POST " + path + " failed after " +
                                 std::to_string(attempt + 1) + " attempts: " +
                                 httplib::to_string(result.error()));
      }
    } else if (result->status >= 500) {
      if (last) {
        throw TransportError(TransportError::Kind::kStatus, request.example_id,
                             "POST " + path + " returned " +
                                 std::to_string(result->status) + " after " +
                                 std::to_string(attempt + 1) + " attempts",
                             result->status);
      }
    } else if (result->status < 200 || result->status >= 300) {
      throw TransportError(TransportError::Kind::kStatus, request.example_id,
                           "POST " + path + " returned " +
                               std::to_string(result->status),
                           result->status);
    } else {
      const json j = ParseBody(result->body, request.example_id);
      BackendResponse r;
      try {
        if (fill) {
          r.chosen = j.at("chosen").get<std::string>();
          if (j.contains("scores")) {
            r.scores = j.at("scores").get<std::map<std::string, double>>();
          }
        } else {
          r.output = j.at("output").get<std::string>();
        }
      } catch (const json::exception& e) {
        throw TransportError(TransportError::Kind::kMalformed,
                             request.example_id,
                             std::string("unexpected response shape: ") +
                                 e.what());
      }
      if (fill) {
        if (auto best = ArgmaxCandidate(r.scores, request.candidate_words)) {
          r.chosen = *best;
        }
        if (std::find(request.candidate_words.begin(),
                      request.candidate_words.end(),
                      r.chosen) == request.candidate_words.end()) {
          throw TransportError(TransportError::Kind::kMalformed,
                               request.example_id,
                               "chosen word '" + r.chosen +
                                   "' is not one of the candidates");
        }
      }
      r.latency_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      return r;
    }
    std::this_thread::sleep_for(
        std::chrono::duration<double, std::milli>(backoff));
    backoff *= endpoint_.backoff_factor;
  }
}

HealthStatus HttpBackend::Health() const {
  httplib::Client client = MakeClient(endpoint_);
  auto result = client.Get("/health");
  if (!result) {
    throw TransportError(KindOf(result.error()), "health",
                         "GET /health failed: " +
                             httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw TransportError(TransportError::Kind::kStatus, "health",
                         "GET /health returned " +
                             std::to_string(result->status),
                         result->status);
  }
  const json j = ParseBody(result->body, "health");
  try {
    return {j.at("status").get<std::string>(), j.value("model", "")};
  } catch (const json::exception& e) {
    throw TransportError(TransportError::Kind::kMalformed, "health",
                         std::string("unexpected health response: ") +
                             e.what());
  }
}

}  // namespace absa
