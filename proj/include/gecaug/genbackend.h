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

#ifndef GECAUG_GENBACKEND_H_
#define GECAUG_GENBACKEND_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gecaug/http_json.h"
#include "gecaug/rng.h"
#include "gecaug/tokens.h"

namespace gecaug {

inline constexpr std::string_view kMaskToken = "[M]";
inline constexpr std::string_view kSepToken = "<sep>";

// Input for a context generator: the correct sides of 1-2 patterns joined
// by `[M]`, optionally with a leading and/or trailing `[M]`.
struct GenerationRequest {
  std::string id;
  std::vector<Tokens> patterns;
  std::string template_text;

  bool operator==(const GenerationRequest&) const = default;
};

// Leading and trailing placeholders are each included with probability 0.5.
// Throws kInvalidArgument for 0 or more than 2 patterns, or an empty one.
GenerationRequest AssembleInput(const std::vector<Tokens>& patterns, Rng& rng,
                                std::string id = "");

// Same layout with the flanking placeholders chosen by the caller.
GenerationRequest RenderTemplate(const std::vector<Tokens>& patterns,
                                 bool leading, bool trailing,
                                 std::string id = "");

// Training example for a fine-tuned generator:
//   input = masked_text <sep> sentence
// `target_span` is the half-open token range of `sentence` within `input`.
struct FinetuneExample {
  std::string input;
  Span target_span;
  Tokens masked_text;
  std::vector<Tokens> segments;  // the masked-out tokens, in order
  std::vector<Span> masked;      // where they came from in the sentence
};

// Masks 1 or 2 (uniform) interior segments of length
// [1, min(4, len/2)]. At least one token stays visible before, between,
// and after the segments; sentences shorter than 5 tokens get one segment.
// Throws kInvalidArgument for sentences shorter than 4 tokens.
FinetuneExample BuildFinetuneExample(const Tokens& sentence, Rng& rng);

// Deterministic variant: masks exactly `spans` (sorted, disjoint).
FinetuneExample MaskSegments(const Tokens& sentence, std::span<const Span> spans);

// The Llama-2 chat instruction block used for 5-shot generation.
std::string_view FewShotInstruction();

struct FewShotExemplar {
  std::string_view input;
  std::string_view output;
};
std::span<const FewShotExemplar> FewShotExemplars();

// Instruction, the five exemplars, then `#input: <template>` (no trailing
// newline).
std::string BuildFewShotPrompt(const GenerationRequest& request);

enum class GenerationStatus { kOk, kRefused, kTransportError };

std::string_view StatusName(GenerationStatus status);

struct GenerationResult {
  std::string request_id;
  std::string text;  // non-empty iff status == kOk
  GenerationStatus status = GenerationStatus::kOk;
  int attempts = 1;
  int http_status = 0;
  std::string error;
};

// Backends must be safe to call concurrently.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual GenerationResult Generate(const GenerationRequest& request) const = 0;
  virtual std::string id() const = 0;
};

// Splices deterministic filler phrases around the patterns. With a drop
// rate, each pattern is independently replaced by filler with that
// probability, which exercises the unmatched-pattern path.
class StubGenerator : public Generator {
 public:
  explicit StubGenerator(std::uint64_t seed = 0, double drop_rate = 0.0);

  GenerationResult Generate(const GenerationRequest& request) const override;
  std::string id() const override;

 private:
  std::uint64_t seed_;
  double drop_rate_;
};

// POST {"id", "template", "prompt", "max_tokens"} -> {"text"}.
class HttpGenerator : public Generator {
 public:
  HttpGenerator(HttpEndpoint endpoint, RetryPolicy retry = {},
                bool send_prompt = false, int max_tokens = 128);

  GenerationResult Generate(const GenerationRequest& request) const override;
  std::string id() const override { return "http"; }

 private:
  HttpEndpoint endpoint_;
  RetryPolicy retry_;
  bool send_prompt_;
  int max_tokens_;
};

GenerationResult Generate(const GenerationRequest& request,
                          const Generator& backend);

}  // namespace gecaug

#endif  // GECAUG_GENBACKEND_H_
