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

#ifndef GECAUG_TOKENS_H_
#define GECAUG_TOKENS_H_

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gecaug {

using Tokens = std::vector<std::string>;

// Half-open index range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int size() const { return end - start; }
  bool empty() const { return start == end; }
  auto operator<=>(const Span&) const = default;
};

// Splits pre-tokenized text on single spaces. Runs of spaces are tolerated;
// tokens containing any other whitespace are rejected with kInvalidToken.
Tokens SplitTokens(std::string_view text);

std::string JoinTokens(std::span<const std::string> tokens);

Tokens Slice(const Tokens& tokens, Span span);

bool IsValidUtf8(std::string_view text);

// Decodes UTF-8 into code points. Input must already be valid.
std::u32string DecodeUtf8(std::string_view text);

// Lowercases ASCII letters only; other bytes pass through untouched.
std::string AsciiLower(std::string_view text);

}  // namespace gecaug

#endif  // GECAUG_TOKENS_H_
