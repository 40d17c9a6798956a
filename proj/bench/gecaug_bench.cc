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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/eval.h"
#include "gecaug/genbackend.h"
#include "gecaug/pattern.h"
#include "gecaug/reference.h"
#include "gecaug/rng.h"
#include "gecaug/synth.h"

namespace gecaug {
namespace {

constexpr std::size_t kPairs = 4000;

Tokens RandomSentence(Rng& rng, int vocab, int min_len, int max_len) {
  static const std::vector<std::string> kWords = {
      "the", "a", "cat", "cats", "sat", "on", "mat", "is", "are", "was",
      "to", "from", "move", "one", "place", "another", "we", "go", "went", "."};
  Tokens t(rng.UniformInt(min_len, max_len));
  for (auto& w : t) w = kWords[rng.Below(vocab)];
  return t;
}

const std::vector<ParallelExample>& Corpus() {
  static const std::vector<ParallelExample> corpus = [] {
    Rng rng(7);
    std::vector<ParallelExample> out;
    for (std::size_t i = 0; i < kPairs; ++i) {
      ParallelExample ex;
      ex.id = std::to_string(i + 1);
      ex.target = RandomSentence(rng, 20, 8, 20);
      ex.source = ex.target;
      const int edits = rng.UniformInt(0, 2);
      for (int e = 0; e < edits; ++e) {
        const std::size_t at = rng.Below(ex.source.size());
        ex.source[at] = RandomSentence(rng, 20, 1, 1)[0];
      }
      out.push_back(std::move(ex));
    }
    return out;
  }();
  return corpus;
}

const std::vector<AnnotatedExample>& Gold() {
  static const std::vector<AnnotatedExample> gold = [] {
    std::vector<AnnotatedExample> out;
    for (const auto& ex : Corpus()) {
      AnnotatedExample a;
      a.id = ex.id;
      a.source = ex.source;
      auto& edits = a.edits[0];
      for (const Edit& e : ExtractEdits(ex.source, ex.target)) {
        edits.push_back({e.src, "R:OTHER", e.replacement});
      }
      out.push_back(std::move(a));
    }
    return out;
  }();
  return gold;
}

void BM_BuildPoolSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::BuildPool(Corpus(), 3));
  }
}
BENCHMARK(BM_BuildPoolSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_BuildPoolParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        BuildPool(Corpus(), 3, "", static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_BuildPoolParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ScoreSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::Score(Corpus(), Gold()));
  }
}
BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ScoreParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Score(Corpus(), Gold(), kDefaultBeta, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_ScoreParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ErrorRateSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::ErrorRate(Corpus()));
}
BENCHMARK(BM_ErrorRateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ErrorRateParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ErrorRate(Corpus(), static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_ErrorRateParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

SynthesisConfig SynthConfig(int workers) {
  SynthesisConfig c;
  c.seed = 11;
  c.count = 2000;
  c.error_rate = 0.5;
  c.workers = workers;
  return c;
}

void BM_SynthesizeSerial(benchmark::State& state) {
  const PatternPool pool = BuildPool(Corpus(), 1);
  const StubGenerator stub(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::Synthesize(pool, stub, SynthConfig(1)));
  }
}
BENCHMARK(BM_SynthesizeSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SynthesizeParallel(benchmark::State& state) {
  const PatternPool pool = BuildPool(Corpus(), 1);
  const StubGenerator stub(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Synthesize(pool, stub, SynthConfig(static_cast<int>(state.range(0)))));
  }
}
BENCHMARK(BM_SynthesizeParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace gecaug

BENCHMARK_MAIN();
