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

#ifndef GECAUG_DENOISE_H_
#define GECAUG_DENOISE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/error.h"
#include "gecaug/http_json.h"
#include "gecaug/synth.h"
#include "json.hpp"

namespace gecaug {

struct CorrectionResult {
  bool ok = false;
  std::string text;
  int attempts = 1;
  std::string error;
};

// A sentence-level corrector. Implementations must be safe to call
// concurrently.
class Corrector {
 public:
  virtual ~Corrector() = default;
  virtual CorrectionResult Correct(const std::string& id,
                                   const std::string& text) const = 0;
  virtual std::string id() const = 0;
};

// Returns its input verbatim.
class IdentityCorrector : public Corrector {
 public:
  CorrectionResult Correct(const std::string& id,
                           const std::string& text) const override;
  std::string id() const override { return "identity"; }
};

// POST {"id", "text"} -> {"text"}.
class HttpCorrector : public Corrector {
 public:
  explicit HttpCorrector(HttpEndpoint endpoint, RetryPolicy retry = {});
  CorrectionResult Correct(const std::string& id,
                           const std::string& text) const override;
  std::string id() const override { return "http"; }

 private:
  HttpEndpoint endpoint_;
  RetryPolicy retry_;
};

// Metadata key written on every relabeled pair. Values: "target" when the
// corrector reproduced the original target, "source" when it returned the
// source unchanged, "changed" otherwise.
inline constexpr char kRelabelMetaKey[] = "relabel";

struct RelabelOptions {
  int workers = 1;
  // When set, progress is saved every `checkpoint_every` pairs to this file
  // (plus `<checkpoint>.partial.jsonl`) and an existing checkpoint resumes.
  std::optional<std::filesystem::path> checkpoint;
  std::size_t checkpoint_every = 1000;
};

// Raised when the corrector fails; remembers how far the run got.
class RelabelError : public Error {
 public:
  RelabelError(const std::string& message, std::size_t completed,
               std::string last_completed_id)
      : Error(ErrorCode::kTransport, message),
        completed_(completed),
        last_completed_id_(std::move(last_completed_id)) {}

  std::size_t completed() const { return completed_; }
  const std::string& last_completed_id() const { return last_completed_id_; }

 private:
  std::size_t completed_;
  std::string last_completed_id_;
};

// Output pair i is (corpus[i].source, corrector(corpus[i].source)); original
// targets only feed the agreement metadata. Order and length are preserved.
std::vector<ParallelExample> Relabel(std::span<const ParallelExample> corpus,
                                     const Corrector& corrector,
                                     const RelabelOptions& options = {});
std::vector<ParallelExample> Relabel(std::span<const SyntheticSample> corpus,
                                     const Corrector& corrector,
                                     const RelabelOptions& options = {});

struct RelabelDiffReport {
  std::uint64_t pairs = 0;
  std::uint64_t targets_changed = 0;
  std::uint64_t changed_tokens = 0;
  std::uint64_t target_tokens = 0;
  std::uint64_t errorful_before = 0;
  std::uint64_t errorful_after = 0;

  double changed_fraction() const;
  double token_change_rate() const;
  double errorful_fraction_before() const;
  double errorful_fraction_after() const;
  nlohmann::ordered_json ToJson() const;
};

// Compares two id-aligned corpora. Token changes are the tokens touched by
// the edits from the old target to the new one. Throws kIdMismatch.
RelabelDiffReport RelabelDiffStats(std::span<const ParallelExample> before,
                                   std::span<const ParallelExample> after);

}  // namespace gecaug

#endif  // GECAUG_DENOISE_H_
