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

#ifndef ABSA_BACKEND_H_
#define ABSA_BACKEND_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absa/errors.h"
#include "absa/prompting.h"
#include "absa/types.h"

namespace absa {

enum class RequestKind { kGenerate, kFillMask };

struct BackendRequest {
  std::string example_id;
  RequestKind kind = RequestKind::kGenerate;
  std::string input;
  // fill_mask only; the answer must be one of these.
  std::vector<std::string> candidate_words;
  std::size_t max_output_units = 512;

  static BackendRequest Generate(std::string example_id, std::string input,
                                 std::size_t max_output_units = 512);
  // Throws ValidationError unless `input` holds exactly one answer slot.
  static BackendRequest FillMask(std::string example_id, std::string input,
                                 std::vector<std::string> candidates);
};

struct BackendResponse {
  std::string output;                    // generate
  std::string chosen;                    // fill_mask
  std::map<std::string, double> scores;  // fill_mask, per candidate
  double latency_ms = 0;

  bool operator==(const BackendResponse&) const = default;
};

// Anything that maps a rendered input to generated text or a slot fill.
// Implementations must be safe to call from several threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResponse Call(const BackendRequest& request) const = 0;
  virtual std::string Describe() const = 0;
};

// Gold renderings keyed by example id, plus what is needed to re-render a
// target with some triplets removed.
class GoldStore {
 public:
  struct Entry {
    PromptRendering rendering;
    std::optional<AbsaSentence> sentence;  // seq2seq examples
    std::optional<Polarity> label;         // classification examples
  };

  GoldStore(TemplateConfig config, Verbalizer verbalizer);

  // Renders with the store's config. Ids must be unique.
  const PromptRendering& Add(const AbsaSentence& sentence);
  const PromptRendering& Add(const ClassificationExample& example, Task task);

  // Throws Error for unknown ids.
  const Entry& Find(std::string_view example_id) const;
  std::size_t size() const { return entries_.size(); }

  const TemplateConfig& config() const { return config_; }
  const Verbalizer& verbalizer() const { return verbalizer_; }

 private:
  const PromptRendering& Insert(Entry entry);

  TemplateConfig config_;
  Verbalizer verbalizer_;
  std::unordered_map<std::string, Entry> entries_;
};

// Echoes the gold target for every request.
class GoldOracleBackend : public Backend {
 public:
  explicit GoldOracleBackend(const GoldStore& store) : store_(store) {}

  BackendResponse Call(const BackendRequest& request) const override;
  std::string Describe() const override { return "gold"; }

 private:
  const GoldStore& store_;
};

// Gold targets with each triplet deleted independently with probability
// `rate`; classification answers flip to a uniformly chosen other label with
// probability `rate`. Draws depend only on (seed, example id), so output is
// reproducible regardless of call order.
class CorruptionOracleBackend : public Backend {
 public:
  CorruptionOracleBackend(const GoldStore& store, double rate,
                          std::uint64_t seed);

  BackendResponse Call(const BackendRequest& request) const override;
  std::string Describe() const override;

 private:
  const GoldStore& store_;
  double rate_;
  std::uint64_t seed_;
};

class TransportError : public Error {
 public:
  enum class Kind { kTimeout, kConnection, kStatus, kMalformed };

  TransportError(Kind kind, std::string example_id, const std::string& detail,
                 int status = 0);

  Kind kind() const { return kind_; }
  const std::string& example_id() const { return example_id_; }
  int status() const { return status_; }

 private:
  Kind kind_;
  std::string example_id_;
  int status_;
};

struct HttpEndpoint {
  std::string base_url;  // "http://host:port"
  int timeout_ms = 30000;
  // Retries after the first attempt; only transport failures and 5xx retry.
  int max_retries = 2;
  int backoff_ms = 100;
  double backoff_factor = 2.0;
};

struct HealthStatus {
  std::string status;
  std::string model;
};

// JSON over HTTP: POST /generate, POST /fill-mask, GET /health.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpEndpoint endpoint);

  BackendResponse Call(const BackendRequest& request) const override;
  std::string Describe() const override;

  HealthStatus Health() const;

 private:
  HttpEndpoint endpoint_;
};

// The first candidate with the highest score; ties go to the earlier
// candidate. Returns nullopt unless every candidate has a score.
std::optional<std::string> ArgmaxCandidate(
    const std::map<std::string, double>& scores,
    std::span<const std::string> candidates);

// Calls `backend` for every request with at most `max_in_flight` requests
// outstanding. Responses come back in request order; if any call fails the
// error of the earliest failing request is rethrown after all calls finish.
std::vector<BackendResponse> RunRequests(const Backend& backend,
                                         std::span<const BackendRequest> requests,
                                         std::size_t max_in_flight = 8);

}  // namespace absa

#endif  // ABSA_BACKEND_H_
