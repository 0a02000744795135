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

#include "absa/backend.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <random>
#include <thread>

namespace absa {
namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits.
double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t CountSlots(std::string_view s, std::string_view slot) {
  std::size_t n = 0;
  for (std::size_t pos = s.find(slot); pos != std::string_view::npos;
       pos = s.find(slot, pos + slot.size())) {
    ++n;
  }
  return n;
}

void CheckCandidate(const BackendRequest& request, const std::string& chosen) {
  if (request.candidate_words.empty()) return;
  if (std::find(request.candidate_words.begin(), request.candidate_words.end(),
                chosen) == request.candidate_words.end()) {
    throw Error("answer '" + chosen + "' for '" + request.example_id +
                "' is not among the request candidates");
  }
}

BackendResponse FillResponse(const BackendRequest& request, std::string chosen) {
  CheckCandidate(request, chosen);
  BackendResponse r;
  for (const std::string& c : request.candidate_words) {
    r.scores[c] = c == chosen ? 1.0 : 0.0;
  }
  r.chosen = std::move(chosen);
  return r;
}

}  // namespace

BackendRequest BackendRequest::Generate(std::string example_id,
                                        std::string input,
                                        std::size_t max_output_units) {
  BackendRequest r;
  r.example_id = std::move(example_id);
  r.kind = RequestKind::kGenerate;
  r.input = std::move(input);
  r.max_output_units = max_output_units;
  return r;
}

BackendRequest BackendRequest::FillMask(std::string example_id,
                                        std::string input,
                                        std::vector<std::string> candidates) {
  const std::size_t slots = CountSlots(input, kAnswerSlot);
  if (slots != 1) {
    throw ValidationError("fill-mask input for '" + example_id + "' has " +
                          std::to_string(slots) +
                          " answer slots, expected exactly one");
  }
  BackendRequest r;
  r.example_id = std::move(example_id);
  r.kind = RequestKind::kFillMask;
  r.input = std::move(input);
  r.candidate_words = std::move(candidates);
  return r;
}

GoldStore::GoldStore(TemplateConfig config, Verbalizer verbalizer)
    : config_(std::move(config)), verbalizer_(std::move(verbalizer)) {}

const PromptRendering& GoldStore::Add(const AbsaSentence& sentence) {
  return Insert({RenderSeq2Seq(sentence, config_, verbalizer_), sentence,
                 std::nullopt});
}

const PromptRendering& GoldStore::Add(const ClassificationExample& example,
                                      Task task) {
  return Insert({RenderClassification(example, task, config_, verbalizer_),
                 std::nullopt, example.label});
}

const PromptRendering& GoldStore::Insert(Entry entry) {
  const std::string id = entry.rendering.example_id;
  auto [it, inserted] = entries_.emplace(id, std::move(entry));
  if (!inserted) throw ValidationError("duplicate example id '" + id + "'");
  return it->second.rendering;
}

const GoldStore::Entry& GoldStore::Find(std::string_view example_id) const {
  auto it = entries_.find(std::string(example_id));
  if (it == entries_.end()) {
    throw Error("unknown example id '" + std::string(example_id) + "'");
  }
  return it->second;
}

BackendResponse GoldOracleBackend::Call(const BackendRequest& request) const {
  const auto start = std::chrono::steady_clock::now();
  const GoldStore::Entry& entry = store_.Find(request.example_id);
  if (entry.rendering.model_input != request.input) {
    throw Error("request input for '" + request.example_id +
                "' differs from the stored rendering");
  }
  BackendResponse r;
  if (request.kind == RequestKind::kFillMask) {
    r = FillResponse(request, entry.rendering.expected_target);
  } else {
    r.output = entry.rendering.expected_target;
  }
  r.latency_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

CorruptionOracleBackend::CorruptionOracleBackend(const GoldStore& store,
                                                 double rate,
                                                 std::uint64_t seed)
    : store_(store), rate_(rate), seed_(seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ValidationError("corruption rate must be in [0, 1]");
  }
}

std::string CorruptionOracleBackend::Describe() const {
  return "corrupt:" + std::to_string(rate_) + " seed " + std::to_string(seed_);
}

BackendResponse CorruptionOracleBackend::Call(
    const BackendRequest& request) const {
  const auto start = std::chrono::steady_clock::now();
  const GoldStore::Entry& entry = store_.Find(request.example_id);
  std::mt19937_64 rng(SplitMix64(seed_ ^ Fnv1a(request.example_id)));
  BackendResponse r;

  if (entry.sentence) {
    AbsaSentence kept = *entry.sentence;
    kept.triplets.clear();
    for (const OpinionTriplet& t : entry.sentence->triplets) {
      if (Uniform(rng) >= rate_) kept.triplets.push_back(t);
    }
    r.output = RenderSeq2Seq(kept, store_.config(), store_.verbalizer())
                   .expected_target;
  } else {
    Polarity answer = *entry.label;
    if (Uniform(rng) < rate_) {
      std::vector<Polarity> others;
      for (Polarity p : kPolarities) {
        if (p != answer) others.push_back(p);
      }
      answer = others[rng() % others.size()];
    }
    if (request.kind == RequestKind::kFillMask) {
      r = FillResponse(request, store_.verbalizer().Word(answer));
    } else {
      r.output = std::string(PolarityName(answer));
    }
  }
  r.latency_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

TransportError::TransportError(Kind kind, std::string example_id,
                               const std::string& detail, int status)
    : Error("transport error for '" + example_id + "': " + detail),
      kind_(kind),
      example_id_(std::move(example_id)),
      status_(status) {}

std::optional<std::string> ArgmaxCandidate(
    const std::map<std::string, double>& scores,
    std::span<const std::string> candidates) {
  std::optional<std::string> best;
  double best_score = 0;
  for (const std::string& c : candidates) {
    auto it = scores.find(c);
    if (it == scores.end()) return std::nullopt;
    if (!best || it->second > best_score) {
      best = c;
      best_score = it->second;
    }
  }
  return best;
}

std::vector<BackendResponse> RunRequests(
    const Backend& backend, std::span<const BackendRequest> requests,
    std::size_t max_in_flight) {
  std::vector<BackendResponse> responses(requests.size());
  std::vector<std::exception_ptr> errors(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      try {
        responses[i] = backend.Call(requests[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers =
      std::min(std::max<std::size_t>(max_in_flight, 1), requests.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return responses;
}

}  // namespace absa
