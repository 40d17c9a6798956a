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

#include "gecaug/error.h"

namespace gecaug {

std::string_view CodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IO_ERROR";
    case ErrorCode::kMalformedLine: return "MALFORMED_LINE";
    case ErrorCode::kEmptySide: return "EMPTY_SIDE";
    case ErrorCode::kInvalidUtf8: return "INVALID_UTF8";
    case ErrorCode::kInvalidToken: return "INVALID_TOKEN";
    case ErrorCode::kMissingSentence: return "MISSING_SENTENCE";
    case ErrorCode::kSpanOutOfBounds: return "SPAN_OUT_OF_BOUNDS";
    case ErrorCode::kOverlappingEdits: return "OVERLAPPING_EDITS";
    case ErrorCode::kSchemaError: return "SCHEMA_ERROR";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kMixedWidth: return "MIXED_WIDTH";
    case ErrorCode::kEmptyPool: return "EMPTY_POOL";
    case ErrorCode::kRetryBudgetExhausted: return "RETRY_BUDGET_EXHAUSTED";
    case ErrorCode::kTransport: return "TRANSPORT_ERROR";
    case ErrorCode::kIdMismatch: return "ID_MISMATCH";
    case ErrorCode::kSourceMismatch: return "SOURCE_MISMATCH";
    case ErrorCode::kConfig: return "CONFIG_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace gecaug
