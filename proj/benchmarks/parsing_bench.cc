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

#include <benchmark/benchmark.h>

#include "absa/parsing.h"
#include "bench_data.h"

namespace absa {
namespace {

void BM_ParseSeq2Seq(benchmark::State& state) {
  const auto regime = static_cast<Regime>(state.range(0));
  const TemplateConfig cfg = bench::Config(regime);
  const Verbalizer v = Verbalizer::Seq2SeqEnglish();
  std::vector<std::string> targets;
  for (const AbsaSentence& s : bench::Sentences(256, 6)) {
    targets.push_back(RenderSeq2Seq(s, cfg, v).expected_target);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ParseSeq2SeqOutput(targets[i++ % targets.size()], cfg, v));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ParseSeq2Seq)
    ->Arg(static_cast<int>(Regime::kTraditional))
    ->Arg(static_cast<int>(Regime::kSentinel))
    ->Arg(static_cast<int>(Regime::kMask));

void BM_ProjectTasd(benchmark::State& state) {
  const auto sentences = bench::Sentences(256, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    const AbsaSentence& s = sentences[i++ % sentences.size()];
    benchmark::DoNotOptimize(ProjectTriplets(s.sentence_id, s.triplets, Task::kTasd));
  }
}
BENCHMARK(BM_ProjectTasd);

}  // namespace
}  // namespace absa
