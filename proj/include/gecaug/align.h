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

#ifndef GECAUG_ALIGN_H_
#define GECAUG_ALIGN_H_

#include <span>
#include <string_view>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/tokens.h"

namespace gecaug {

// Alignment costs are kept in half units so they stay exact integers:
//   match 0, insert/delete 2,
//   substitute 2 (case-only difference), 3 (character similarity >= 0.5),
//   or 4 (otherwise), transposition of k tokens 2k - 1.
inline constexpr int kInsertCost = 2;
inline constexpr int kDeleteCost = 2;

enum class OpKind { kMatch, kSubstitute, kInsert, kDelete, kTranspose };

struct AlignOp {
  OpKind kind;
  Span src;
  Span tgt;

  bool operator==(const AlignOp&) const = default;
};

enum class EditType { kInsertion, kDeletion, kSubstitution };

std::string_view EditTypeName(EditType type);

struct Edit {
  Span src;
  Tokens replacement;
  Span tgt;
  EditType type;

  bool operator==(const Edit&) const = default;
};

// Dice coefficient over code points: 2 * LCS(a, b) / (|a| + |b|).
double CharSimilarity(std::string_view a, std::string_view b);

// Half-unit cost of substituting `a` by `b` (0 when equal).
int SubstitutionCost(std::string_view a, std::string_view b);

// Minimal-cost monotone alignment. Ties prefer match, then substitute,
// delete, insert, and finally transposition.
std::vector<AlignOp> AlignTokens(const Tokens& source, const Tokens& target);

// Half-unit cost of an alignment under the scheme above.
int AlignmentCost(std::span<const AlignOp> ops, const Tokens& source,
                  const Tokens& target);

// Collapses maximal runs of adjacent non-match ops into Edits.
std::vector<Edit> MergeEdits(std::span<const AlignOp> ops, const Tokens& source,
                             const Tokens& target);

std::vector<Edit> ExtractEdits(const Tokens& source, const Tokens& target);
std::vector<Edit> ExtractEdits(const ParallelExample& pair);

// Applies sorted, non-overlapping edits to `source`.
Tokens ApplyEdits(const Tokens& source, std::span<const Edit> edits);

}  // namespace gecaug

#endif  // GECAUG_ALIGN_H_
