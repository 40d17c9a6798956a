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

#include "gecaug/align.h"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "gecaug/error.h"

namespace gecaug {
namespace {

// Backpointer for one DP cell; `width` is the transposition length.
struct Step {
  OpKind kind = OpKind::kMatch;
  int width = 1;
};

std::size_t Lcs(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::string_view EditTypeName(EditType type) {
  switch (type) {
    case EditType::kInsertion: return "insertion";
    case EditType::kDeletion: return "deletion";
    case EditType::kSubstitution: return "substitution";
  }
  return "unknown";
}

double CharSimilarity(std::string_view a, std::string_view b) {
  const std::u32string ca = DecodeUtf8(a);
  const std::u32string cb = DecodeUtf8(b);
  if (ca.empty() && cb.empty()) return 1.0;
  return 2.0 * static_cast<double>(Lcs(ca, cb)) /
         static_cast<double>(ca.size() + cb.size());
}

int SubstitutionCost(std::string_view a, std::string_view b) {
  if (a == b) return 0;
  if (AsciiLower(a) == AsciiLower(b)) return 2;
  if (CharSimilarity(a, b) >= 0.5) return 3;
  return 4;
}

std::vector<AlignOp> AlignTokens(const Tokens& source, const Tokens& target) {
  const int n = static_cast<int>(source.size());
  const int m = static_cast<int>(target.size());

  // Intern tokens so transposition checks can count multisets in a flat array.
  std::unordered_map<std::string_view, int> ids;
  std::vector<int> src_id(n), tgt_id(m);
  for (int i = 0; i < n; ++i) {
    src_id[i] = ids.try_emplace(source[i], static_cast<int>(ids.size())).first->second;
  }
  for (int j = 0; j < m; ++j) {
    tgt_id[j] = ids.try_emplace(target[j], static_cast<int>(ids.size())).first->second;
  }

  const int w = m + 1;
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> cost((n + 1) * w, kInf);
  std::vector<Step> step((n + 1) * w);
  cost[0] = 0;
  for (int i = 1; i <= n; ++i) {
    cost[i * w] = i * kDeleteCost;
    step[i * w] = {OpKind::kDelete, 1};
  }
  for (int j = 1; j <= m; ++j) {
    cost[j] = j * kInsertCost;
    step[j] = {OpKind::kInsert, 1};
  }

  std::vector<int> diff(ids.size(), 0);
  std::vector<int> touched;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      const int diag = cost[(i - 1) * w + (j - 1)];
      int best;
      Step choice;
      if (src_id[i - 1] == tgt_id[j - 1]) {
        best = diag;
        choice = {OpKind::kMatch, 1};
      } else {
        best = diag + SubstitutionCost(source[i - 1], target[j - 1]);
        choice = {OpKind::kSubstitute, 1};
      }
      if (const int c = cost[(i - 1) * w + j] + kDeleteCost; c < best) {
        best = c;
        choice = {OpKind::kDelete, 1};
      }
      if (const int c = cost[i * w + (j - 1)] + kInsertCost; c < best) {
        best = c;
        choice = {OpKind::kInsert, 1};
      }

      // Transpositions of width k >= 2: equal multisets, unequal sequences.
      int nonzero = 0;
      bool same_sequence = true;
      auto bump = [&](int id, int delta) {
        if (diff[id] == 0) touched.push_back(id);
        const int before = diff[id];
        diff[id] += delta;
        if (before == 0) ++nonzero;
        if (diff[id] == 0) --nonzero;
      };
      for (int k = 1; k <= std::min(i, j); ++k) {
        bump(src_id[i - k], +1);
        bump(tgt_id[j - k], -1);
        same_sequence = same_sequence && src_id[i - k] == tgt_id[j - k];
        if (k >= 2 && nonzero == 0 && !same_sequence) {
          const int c = cost[(i - k) * w + (j - k)] + 2 * k - 1;
          if (c < best) {
            best = c;
            choice = {OpKind::kTranspose, k};
          }
        }
      }
      for (int id : touched) diff[id] = 0;
      touched.clear();

      cost[i * w + j] = best;
      step[i * w + j] = choice;
    }
  }

  std::vector<AlignOp> ops;
  int i = n;
  int j = m;
  while (i > 0 || j > 0) {
    const Step s = step[i * w + j];
    switch (s.kind) {
      case OpKind::kMatch:
      case OpKind::kSubstitute:
        ops.push_back({s.kind, {i - 1, i}, {j - 1, j}});
        --i;
        --j;
        break;
      case OpKind::kDelete:
        ops.push_back({s.kind, {i - 1, i}, {j, j}});
        --i;
        break;
      case OpKind::kInsert:
        ops.push_back({s.kind, {i, i}, {j - 1, j}});
        --j;
        break;
      case OpKind::kTranspose:
        ops.push_back({s.kind, {i - s.width, i}, {j - s.width, j}});
        i -= s.width;
        j -= s.width;
        break;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

int AlignmentCost(std::span<const AlignOp> ops, const Tokens& source,
                  const Tokens& target) {
  int total = 0;
  for (const AlignOp& op : ops) {
    switch (op.kind) {
      case OpKind::kMatch:
        break;
      case OpKind::kSubstitute:
        total += SubstitutionCost(source[op.src.start], target[op.tgt.start]);
        break;
      case OpKind::kInsert:
        total += kInsertCost;
        break;
      case OpKind::kDelete:
        total += kDeleteCost;
        break;
      case OpKind::kTranspose:
        total += 2 * op.src.size() - 1;
        break;
    }
  }
  return total;
}

std::vector<Edit> MergeEdits(std::span<const AlignOp> ops, const Tokens& source,
                             const Tokens& target) {
  std::vector<Edit> edits;
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].kind == OpKind::kMatch) {
      ++k;
      continue;
    }
    Span src = ops[k].src;
    Span tgt = ops[k].tgt;
    while (k < ops.size() && ops[k].kind != OpKind::kMatch) {
      src.end = ops[k].src.end;
      tgt.end = ops[k].tgt.end;
      ++k;
    }
    Edit e;
    e.src = src;
    e.tgt = tgt;
    e.replacement = Slice(target, tgt);
    if (std::equal(source.begin() + src.start, source.begin() + src.end,
                   e.replacement.begin(), e.replacement.end())) {
      continue;
    }
    e.type = src.empty()        ? EditType::kInsertion
             : tgt.empty()      ? EditType::kDeletion
                                : EditType::kSubstitution;
    edits.push_back(std::move(e));
  }
  return edits;
}

std::vector<Edit> ExtractEdits(const Tokens& source, const Tokens& target) {
  if (source == target) return {};
  const auto ops = AlignTokens(source, target);
  return MergeEdits(ops, source, target);
}

std::vector<Edit> ExtractEdits(const ParallelExample& pair) {
  return ExtractEdits(pair.source, pair.target);
}

Tokens ApplyEdits(const Tokens& source, std::span<const Edit> edits) {
  Tokens out;
  out.reserve(source.size() + 4);
  int cursor = 0;
  for (const Edit& e : edits) {
    if (e.src.start < cursor || e.src.end > static_cast<int>(source.size())) {
      throw Error(ErrorCode::kOverlappingEdits,
                  "edits are unsorted, overlapping, or out of range");
    }
    out.insert(out.end(), source.begin() + cursor, source.begin() + e.src.start);
    out.insert(out.end(), e.replacement.begin(), e.replacement.end());
    cursor = e.src.end;
  }
  out.insert(out.end(), source.begin() + cursor, source.end());
  return out;
}

}  // namespace gecaug
