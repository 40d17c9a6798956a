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

#ifndef GECAUG_REFERENCE_H_
#define GECAUG_REFERENCE_H_

// Single-threaded versions of the parallel kernels. They share the
// per-item logic with the parallel code and differ only in scheduling;
// tests and benchmarks compare the two.

#include <span>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/denoise.h"
#include "gecaug/eval.h"
#include "gecaug/genbackend.h"
#include "gecaug/pattern.h"
#include "gecaug/synth.h"

namespace gecaug::reference {

PatternPool BuildPool(std::span<const ParallelExample> corpus, int n);

SynthesisResult Synthesize(const PatternPool& pool, const Generator& backend,
                           const SynthesisConfig& config);

std::vector<ParallelExample> Relabel(std::span<const ParallelExample> corpus,
                                     const Corrector& corrector);

ScoreReport Score(std::span<const ParallelExample> hypothesis,
                  std::span<const AnnotatedExample> gold,
                  double beta = kDefaultBeta);

double ErrorRate(std::span<const ParallelExample> corpus);

}  // namespace gecaug::reference

#endif  // GECAUG_REFERENCE_H_
