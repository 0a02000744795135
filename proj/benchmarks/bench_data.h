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

#ifndef ABSA_BENCH_DATA_H_
#define ABSA_BENCH_DATA_H_

#include <cstddef>
#include <vector>

#include "absa/prompting.h"
#include "absa/types.h"

namespace absa::bench {

// Deterministic synthetic sentences with up to `max_triplets` opinions each.
std::vector<AbsaSentence> Sentences(std::size_t n, std::size_t max_triplets);

TemplateConfig Config(Regime regime);

}  // namespace absa::bench

#endif  // ABSA_BENCH_DATA_H_
