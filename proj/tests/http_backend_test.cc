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

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <nlohmann/json.hpp>
#include <thread>

#include "absa/backend.h"
#include "absa/errors.h"

namespace absa {
namespace {

using nlohmann::json;

// In-process stand-in for an inference server.
class StubServer {
 public:
  StubServer() {
    server_.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok","model":"stub-t5"})", "application/json");
    });
  }
  ~StubServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Server& server() { return server_; }

  void Start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  HttpEndpoint Endpoint(int max_retries = 2, int timeout_ms = 2000) const {
    HttpEndpoint e;
    e.base_url = "http://127.0.0.1:" + std::to_string(port_);
    e.max_retries = max_retries;
    e.timeout_ms = timeout_ms;
    e.backoff_ms = 1;
    return e;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST(HttpBackendTest, GenerateEchoesCannedOutput) {
  StubServer stub;
  json seen;
  stub.server().Post("/generate", [&](const httplib::Request& req,
                                      httplib::Response& res) {
    seen = json::parse(req.body);
    res.set_content(R"({"output":"<extra_id_0> Food quality <extra_id_1>"})",
                    "application/json");
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint());
  const auto r = backend.Call(BackendRequest::Generate("s1", "prompt", 64));
  EXPECT_EQ(r.output, "<extra_id_0> Food quality <extra_id_1>");
  EXPECT_EQ(seen, json({{"input", "prompt"}, {"max_new_units", 64}}));
  EXPECT_GE(r.latency_ms, 0.0);
}

TEST(HttpBackendTest, FillMaskRestrictedToCandidates) {
  StubServer stub;
  json seen;
  stub.server().Post("/fill-mask", [&](const httplib::Request& req,
                                       httplib::Response& res) {
    seen = json::parse(req.body);
    res.set_content(
        R"({"chosen":"ok","scores":{"dobrý":-0.2,"ok":-1.5,"špatný":-3.0}})",
        "application/json");
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint());
  const std::vector<std::string> candidates = {"dobrý", "ok", "špatný"};
  const auto r = backend.Call(
      BackendRequest::FillMask("d1", "Je to [MASK] film.", candidates));
  EXPECT_EQ(seen["candidates"], json(candidates));
  // The score argmax decides, whatever the server claimed.
  EXPECT_EQ(r.chosen, "dobrý");
  EXPECT_EQ(r.scores.size(), 3u);
}

TEST(HttpBackendTest, FillMaskOutsideCandidatesIsMalformed) {
  StubServer stub;
  stub.server().Post("/fill-mask", [](const httplib::Request&,
                                      httplib::Response& res) {
    res.set_content(R"({"chosen":"skvělý","scores":{}})", "application/json");
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint());
  try {
    backend.Call(BackendRequest::FillMask("d7", "[MASK]", {"dobrý", "ok"}));
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.kind(), TransportError::Kind::kMalformed);
    EXPECT_EQ(e.example_id(), "d7");
  }
}

TEST(HttpBackendTest, RetriesServerErrorsThenFails) {
  StubServer stub;
  std::atomic<int> calls{0};
  stub.server().Post("/generate", [&](const httplib::Request&,
                                      httplib::Response& res) {
    ++calls;
    res.status = 500;
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint(2));
  try {
    backend.Call(BackendRequest::Generate("s9", "x"));
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.kind(), TransportError::Kind::kStatus);
    EXPECT_EQ(e.status(), 500);
    EXPECT_EQ(e.example_id(), "s9");
  }
  // One attempt plus two retries.
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpBackendTest, RecoversAfterTransientError) {
  StubServer stub;
  std::atomic<int> calls{0};
  stub.server().Post("/generate", [&](const httplib::Request&,
                                      httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"output":"fine"})", "application/json");
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint(2));
  EXPECT_EQ(backend.Call(BackendRequest::Generate("s1", "x")).output, "fine");
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpBackendTest, ClientErrorsAreNotRetried) {
  StubServer stub;
  std::atomic<int> calls{0};
  stub.server().Post("/generate", [&](const httplib::Request&,
                                      httplib::Response& res) {
    ++calls;
    res.status = 422;
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint(5));
  EXPECT_THROW(backend.Call(BackendRequest::Generate("s1", "x")), TransportError);
  EXPECT_EQ(calls.load(), 1);
}

TEST(HttpBackendTest, MalformedBodies) {
  StubServer stub;
  stub.server().Post("/generate", [](const httplib::Request& req,
                                     httplib::Response& res) {
    const auto input = json::parse(req.body).at("input").get<std::string>();
    if (input == "not json") res.set_content("<html>", "text/html");
    if (input == "array") res.set_content("[1,2]", "application/json");
    if (input == "wrong key") res.set_content(R"({"text":"x"})", "application/json");
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint());
  for (const char* input : {"not json", "array", "wrong key"}) {
    try {
      backend.Call(BackendRequest::Generate("s1", input));
      ADD_FAILURE() << input;
    } catch (const TransportError& e) {
      EXPECT_EQ(e.kind(), TransportError::Kind::kMalformed) << input;
    }
  }
}

TEST(HttpBackendTest, Timeout) {
  StubServer stub;
  stub.server().Post("/generate", [](const httplib::Request&,
                                     httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(R"({"output":"late"})", "application/json");
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint(0, 150));
  try {
    backend.Call(BackendRequest::Generate("slow", "x"));
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.kind(), TransportError::Kind::kTimeout);
    EXPECT_EQ(e.example_id(), "slow");
  }
}

TEST(HttpBackendTest, ConnectionRefused) {
  // Bind an ephemeral port and close it without listening.
  int port = 0;
  {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    ASSERT_GE(fd, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
    socklen_t len = sizeof(addr);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    port = ntohs(addr.sin_port);
    ::close(fd);
  }
  HttpEndpoint e;
  e.base_url = "http://127.0.0.1:" + std::to_string(port);
  e.max_retries = 1;
  e.backoff_ms = 1;
  e.timeout_ms = 500;
  const HttpBackend backend(e);
  try {
    backend.Call(BackendRequest::Generate("s1", "x"));
    FAIL() << "expected TransportError";
  } catch (const TransportError& err) {
    EXPECT_EQ(err.kind(), TransportError::Kind::kConnection);
  }
}

TEST(HttpBackendTest, Health) {
  StubServer stub;
  stub.Start();
  const HttpBackend backend(stub.Endpoint());
  const HealthStatus h = backend.Health();
  EXPECT_EQ(h.status, "ok");
  EXPECT_EQ(h.model, "stub-t5");
}

TEST(HttpBackendTest, ConcurrentRequestsKeepOrder) {
  StubServer stub;
  stub.server().new_task_queue = [] { return new httplib::ThreadPool(8); };
  stub.server().Post("/generate", [](const httplib::Request& req,
                                     httplib::Response& res) {
    const auto input = json::parse(req.body).at("input").get<std::string>();
    std::this_thread::sleep_for(std::chrono::milliseconds(input.size() % 5));
    res.set_content(json({{"output", "echo " + input}}).dump(), "application/json");
  });
  stub.Start();
  const HttpBackend backend(stub.Endpoint());
  std::vector<BackendRequest> requests;
  for (int i = 0; i < 24; ++i) {
    requests.push_back(BackendRequest::Generate(
        "e" + std::to_string(i), std::string(static_cast<std::size_t>(i), 'x')));
  }
  const auto responses = RunRequests(backend, requests, 8);
  for (int i = 0; i < 24; ++i) {
    EXPECT_EQ(responses[i].output,
              "echo " + std::string(static_cast<std::size_t>(i), 'x'));
  }
}

TEST(HttpBackendTest, InvalidEndpoint) {
  HttpEndpoint e;
  e.base_url = "http://127.0.0.1:1";
  e.max_retries = -1;
  EXPECT_THROW(HttpBackend{e}, ValidationError);
}

}  // namespace
}  // namespace absa
