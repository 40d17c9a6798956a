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

#include "gecaug/genbackend.h"

#include <algorithm>
#include <array>

#include "gecaug/error.h"
#include "gecaug/hash.h"

namespace gecaug {
namespace {

constexpr int kMaxSegmentLength = 4;

constexpr std::string_view kInstruction =
    "[INST] <<SYS>> You are a helpful assistant.<</SYS>>\n"
    "Use phrases from #input to make sentences.\n"
    "You should fill in [M] to make #input sentence more complete.\n"
    "You can't change any form or order of the words in #input.\n"
    "Make sure you fully use the phrases in #input. [/INST]";

constexpr std::array<FewShotExemplar, 5> kExemplars = {{
    {"[M] sized city with eighty thousand [M]",
     "My town is a medium - sized city with eighty thousand inhabitants ."},
    {"[M] my own plan too , [M] to be the same as them . [M]",
     "I have my own plan too , but I do n't want to be the same as them . I "
     "want to become a journalist ."},
    {"Nowadays , each family has more than 1 [M] one of several reasons why [M]",
     "Nowadays , each family has more than 1 car for each person , this is "
     "only one of several reasons why people use less public transport ."},
    {"[M] they might want to safeguard [M]",
     "On the other hand , they might want to safeguard the national image ."},
    {"Lucy , Molly , and [M] a cowboy , and a [M]",
     "Lucy , Molly , and their parents , a cowboy , and a teacher ."},
}};

constexpr std::array<std::string_view, 8> kLeadFillers = {
    "In my opinion ,", "Last summer", "I think that", "Every morning",
    "As a matter of fact ,", "My friends and I", "Yesterday", "At school"};
constexpr std::array<std::string_view, 7> kMidFillers = {
    "and then", "because", "but", "so that", "while", "and after that",
    "which means"};
constexpr std::array<std::string_view, 6> kTailFillers = {
    "every day .", "in the end .", "at the weekend .", "with my family .",
    "for a long time .", "."};

template <std::size_t N>
std::string_view Pick(const std::array<std::string_view, N>& table, Rng& rng) {
  return table[rng.Below(N)];
}

}  // namespace

GenerationRequest RenderTemplate(const std::vector<Tokens>& patterns,
                                 bool leading, bool trailing, std::string id) {
  if (patterns.empty() || patterns.size() > 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "generation input needs 1 or 2 patterns, got " +
                    std::to_string(patterns.size()));
  }
  for (const Tokens& p : patterns) {
    if (p.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "patterns with an empty correct side cannot be sent");
    }
  }
  Tokens parts;
  if (leading) parts.emplace_back(kMaskToken);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (i) parts.emplace_back(kMaskToken);
    parts.insert(parts.end(), patterns[i].begin(), patterns[i].end());
  }
  if (trailing) parts.emplace_back(kMaskToken);

  GenerationRequest req;
  req.id = std::move(id);
  req.patterns = patterns;
  req.template_text = JoinTokens(parts);
  return req;
}

GenerationRequest AssembleInput(const std::vector<Tokens>& patterns, Rng& rng,
                                std::string id) {
  const bool leading = rng.Bernoulli(0.5);
  const bool trailing = rng.Bernoulli(0.5);
  return RenderTemplate(patterns, leading, trailing, std::move(id));
}

FinetuneExample MaskSegments(const Tokens& sentence,
                             std::span<const Span> spans) {
  FinetuneExample ex;
  int cursor = 0;
  for (const Span& s : spans) {
    if (s.start < cursor || s.empty() ||
        s.end > static_cast<int>(sentence.size())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mask spans must be sorted, disjoint and non-empty");
    }
    ex.masked_text.insert(ex.masked_text.end(), sentence.begin() + cursor,
                          sentence.begin() + s.start);
    ex.masked_text.emplace_back(kMaskToken);
    ex.segments.push_back(Slice(sentence, s));
    ex.masked.push_back(s);
    cursor = s.end;
  }
  ex.masked_text.insert(ex.masked_text.end(), sentence.begin() + cursor,
                        sentence.end());

  Tokens full = ex.masked_text;
  full.emplace_back(kSepToken);
  const int begin = static_cast<int>(full.size());
  full.insert(full.end(), sentence.begin(), sentence.end());
  ex.target_span = {begin, static_cast<int>(full.size())};
  ex.input = JoinTokens(full);
  return ex;
}

FinetuneExample BuildFinetuneExample(const Tokens& sentence, Rng& rng) {
  const int len = static_cast<int>(sentence.size());
  if (len < 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "sentence of " + std::to_string(len) +
                    " tokens is too short to mask (need >= 4)");
  }
  const int max_len = std::min(kMaxSegmentLength, len / 2);
  int count = rng.UniformInt(1, 2);
  if (count == 2 && len < 5) count = 1;

  // Segment lengths; two segments plus three visible tokens must fit.
  std::vector<int> lengths(count);
  for (;;) {
    int sum = 0;
    for (int& l : lengths) {
      l = rng.UniformInt(1, max_len);
      sum += l;
    }
    if (sum + count + 1 <= len) break;
  }

  // Spread the spare visible tokens over the count+1 gaps uniformly over
  // compositions (stars and bars), each gap keeping at least one token.
  int visible = len;
  for (int l : lengths) visible -= l;
  const int spare = visible - (count + 1);
  std::vector<int> slots(spare + count);
  for (int i = 0; i < static_cast<int>(slots.size()); ++i) slots[i] = i;
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.Below(slots.size() - i));
    std::swap(slots[i], slots[j]);
  }
  std::vector<int> bars(slots.begin(), slots.begin() + count);
  std::sort(bars.begin(), bars.end());
  std::vector<int> gaps(count + 1);
  int prev = -1;
  for (int i = 0; i < count; ++i) {
    gaps[i] = 1 + (bars[i] - prev - 1);
    prev = bars[i];
  }
  gaps[count] = 1 + (spare + count - 1 - prev);

  std::vector<Span> spans;
  int pos = 0;
  for (int i = 0; i < count; ++i) {
    pos += gaps[i];
    spans.push_back({pos, pos + lengths[i]});
    pos += lengths[i];
  }
  return MaskSegments(sentence, spans);
}

std::string_view FewShotInstruction() { return kInstruction; }

std::span<const FewShotExemplar> FewShotExemplars() { return kExemplars; }

std::string BuildFewShotPrompt(const GenerationRequest& request) {
  std::string out(kInstruction);
  out += '\n';
  for (const FewShotExemplar& ex : kExemplars) {
    out += "#input: ";
    out += ex.input;
    out += "\n#output: ";
    out += ex.output;
    out += "\n\n";
  }
  out += "#input: ";
  out += request.template_text;
  return out;
}

std::string_view StatusName(GenerationStatus status) {
  switch (status) {
    case GenerationStatus::kOk: return "ok";
    case GenerationStatus::kRefused: return "refused";
    case GenerationStatus::kTransportError: return "transport_error";
  }
  return "unknown";
}

StubGenerator::StubGenerator(std::uint64_t seed, double drop_rate)
    : seed_(seed), drop_rate_(drop_rate) {}

std::string StubGenerator::id() const {
  return drop_rate_ > 0 ? "stub-drop" : "stub";
}

GenerationResult StubGenerator::Generate(const GenerationRequest& request) const {
  Rng rng(seed_ ^ Fnv1a64(request.id) ^ Fnv1a64(request.template_text));
  const Tokens parts = SplitTokens(request.template_text);

  std::vector<std::string> pieces;
  std::vector<std::string> pattern_run;
  auto flush_pattern = [&] {
    if (pattern_run.empty()) return;
    if (drop_rate_ > 0 && rng.Bernoulli(drop_rate_)) {
      pieces.emplace_back(Pick(kMidFillers, rng));
    } else {
      pieces.push_back(JoinTokens(pattern_run));
    }
    pattern_run.clear();
  };
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] != kMaskToken) {
      pattern_run.push_back(parts[i]);
      continue;
    }
    flush_pattern();
    if (i == 0) {
      pieces.emplace_back(Pick(kLeadFillers, rng));
    } else if (i + 1 == parts.size()) {
      pieces.emplace_back(Pick(kTailFillers, rng));
    } else {
      pieces.emplace_back(Pick(kMidFillers, rng));
    }
  }
  flush_pattern();

  GenerationResult result;
  result.request_id = request.id;
  result.text = JoinTokens(pieces);
  result.status = result.text.empty() ? GenerationStatus::kRefused
                                      : GenerationStatus::kOk;
  return result;
}

HttpGenerator::HttpGenerator(HttpEndpoint endpoint, RetryPolicy retry,
                             bool send_prompt, int max_tokens)
    : endpoint_(std::move(endpoint)),
      retry_(retry),
      send_prompt_(send_prompt),
      max_tokens_(max_tokens) {}

GenerationResult HttpGenerator::Generate(const GenerationRequest& request) const {
  nlohmann::ordered_json body;
  body["id"] = request.id;
  body["template"] = request.template_text;
  body["prompt"] = send_prompt_ ? nlohmann::ordered_json(BuildFewShotPrompt(request))
                                : nlohmann::ordered_json(nullptr);
  body["max_tokens"] = max_tokens_;

  const HttpJsonResult http = PostJsonWithRetry(endpoint_, body, retry_);
  GenerationResult result;
  result.request_id = request.id;
  result.attempts = http.attempts;
  result.http_status = http.last_status;
  if (!http.ok) {
    result.status = GenerationStatus::kTransportError;
    result.error = http.error;
    return result;
  }
  if (!http.body.is_object() || !http.body.contains("text") ||
      !http.body["text"].is_string()) {
    result.status = GenerationStatus::kTransportError;
    result.error = "malformed response: missing string field 'text'";
    return result;
  }
  result.text = http.body["text"].get<std::string>();
  if (result.text.find_first_not_of(" \t\r\n") == std::string::npos) {
    result.text.clear();
    result.status = GenerationStatus::kRefused;
  }
  return result;
}

GenerationResult Generate(const GenerationRequest& request,
                          const Generator& backend) {
  return backend.Generate(request);
}

}  // namespace gecaug
