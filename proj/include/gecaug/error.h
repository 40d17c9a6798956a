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

#ifndef GECAUG_ERROR_H_
#define GECAUG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gecaug {

// Every failure the toolkit reports carries one of these codes. The CLI
// prints CodeName() as the machine-parsable part of its error line.
enum class ErrorCode {
  kIo,
  kMalformedLine,
  kEmptySide,
  kInvalidUtf8,
  kInvalidToken,
  kMissingSentence,
  kSpanOutOfBounds,
  kOverlappingEdits,
  kSchemaError,
  kInvalidArgument,
  kMixedWidth,
  kEmptyPool,
  kRetryBudgetExhausted,
  kTransport,
  kIdMismatch,
  kSourceMismatch,
  kConfig,
};

std::string_view CodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Corpus-reader failures also remember where they happened (1-based line,
// 0 when not applicable).
class CorpusError : public Error {
 public:
  CorpusError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gecaug

#endif  // GECAUG_ERROR_H_
