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

#include "gecaug/pattern.h"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "gecaug/error.h"
#include "json.hpp"

namespace gecaug {
namespace {

void CheckWidth(int n) {
  if (n < 1 || n % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "pattern width must be odd and >= 1, got " + std::to_string(n));
  }
}

Tokens TokensFromJson(const nlohmann::json& j, std::size_t line) {
  if (!j.is_array()) {
    throw CorpusError(ErrorCode::kSchemaError, line, "expected token array");
  }
  Tokens out;
  for (const auto& t : j) {
    if (!t.is_string()) {
      throw CorpusError(ErrorCode::kSchemaError, line, "tokens must be strings");
    }
    out.push_back(t.get<std::string>());
  }
  return out;
}

}  // namespace

ErrorPattern ExtendToNgram(const Edit& edit,
                           std::span<const Edit> sentence_edits,
                           const Tokens& source, const Tokens& /*target*/,
                           int n) {
  CheckWidth(n);
  const int k = (n - 1) / 2;

  // Context lies strictly between neighbouring edits, where source and
  // target agree token for token.
  int lo = 0;
  int hi = static_cast<int>(source.size());
  for (const Edit& other : sentence_edits) {
    if (other == edit) continue;
    if (other.src.end <= edit.src.start) lo = std::max(lo, other.src.end);
    if (other.src.start >= edit.src.end) hi = std::min(hi, other.src.start);
  }
  const int left = std::max(lo, edit.src.start - k);
  const int right = std::min(hi, edit.src.end + k);

  ErrorPattern p;
  p.n = n;
  p.wrong.assign(source.begin() + left, source.begin() + right);
  p.correct.assign(source.begin() + left, source.begin() + edit.src.start);
  p.correct.insert(p.correct.end(), edit.replacement.begin(),
                   edit.replacement.end());
  p.correct.insert(p.correct.end(), source.begin() + edit.src.end,
                   source.begin() + right);
  return p;
}

ErrorPattern ExtendToNgram(const Edit& edit, const Tokens& source,
                           const Tokens& target, int n) {
  return ExtendToNgram(edit, std::span<const Edit>(&edit, 1), source, target, n);
}

std::vector<ErrorPattern> PatternsOf(const ParallelExample& pair, int n) {
  const auto edits = ExtractEdits(pair);
  std::vector<ErrorPattern> out;
  out.reserve(edits.size());
  for (const Edit& e : edits) {
    out.push_back(ExtendToNgram(e, edits, pair.source, pair.target, n));
  }
  return out;
}

PatternPool::PatternPool(int n) : n_(n) { CheckWidth(n); }

void PatternPool::Add(const ErrorPattern& pattern, std::uint64_t count) {
  if (pattern.n != n_) {
    throw Error(ErrorCode::kMixedWidth,
                "pattern of width " + std::to_string(pattern.n) +
                    " added to pool of width " + std::to_string(n_));
  }
  if (pattern.wrong == pattern.correct) {
    throw Error(ErrorCode::kInvalidArgument, "vacuous pattern");
  }
  if (count == 0) return;
  counts_[pattern] += count;
  total_ += count;
}

void PatternPool::AddProvenance(std::string corpus_id) {
  provenance_.push_back(std::move(corpus_id));
}

std::uint64_t PatternPool::count(const ErrorPattern& pattern) const {
  const auto it = counts_.find(pattern);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::pair<ErrorPattern, std::uint64_t>> PatternPool::TopK(
    std::size_t k) const {
  std::vector<std::pair<ErrorPattern, std::uint64_t>> all(counts_.begin(),
                                                          counts_.end());
  // counts_ is already in lexicographic order; a stable sort keeps it for ties.
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

PatternPool BuildPool(std::span<const ParallelExample> corpus, int n,
                      std::string corpus_id, int workers) {
  CheckWidth(n);
  workers = std::max(1, workers);
  std::vector<PatternPool> partial(workers, PatternPool(n));
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t size = corpus.size();

#pragma omp parallel num_threads(workers)
  {
    const int t = omp_get_thread_num();
    const int used = omp_get_num_threads();
    const std::size_t begin = size * t / used;
    const std::size_t end = size * (t + 1) / used;
    try {
      for (std::size_t i = begin; i < end; ++i) {
        for (const ErrorPattern& p : PatternsOf(corpus[i], n)) {
          partial[t].Add(p);
        }
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  PatternPool pool = MergePools(partial);
  if (!corpus_id.empty()) pool.AddProvenance(std::move(corpus_id));
  return pool;
}

PatternPool MergePools(std::span<const PatternPool> pools) {
  if (pools.empty()) return PatternPool(1);
  PatternPool merged(pools.front().n());
  for (const PatternPool& pool : pools) {
    if (pool.n() != merged.n()) {
      throw Error(ErrorCode::kMixedWidth, "cannot merge pools of width " +
                                              std::to_string(merged.n()) +
                                              " and " + std::to_string(pool.n()));
    }
    for (const auto& [pattern, count] : pool.counts()) merged.Add(pattern, count);
    for (const auto& id : pool.provenance()) merged.AddProvenance(id);
  }
  return merged;
}

void WritePool(const PatternPool& pool, std::ostream& out) {
  for (const auto& [pattern, count] : pool.TopK(pool.size())) {
    nlohmann::ordered_json j;
    j["wrong"] = pattern.wrong;
    j["correct"] = pattern.correct;
    j["count"] = count;
    j["n"] = pattern.n;
    out << j.dump() << '\n';
  }
}

void WritePool(const PatternPool& pool, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WritePool(pool, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

PatternPool ParsePool(std::istream& in, int default_n) {
  std::vector<std::pair<ErrorPattern, std::uint64_t>> entries;
  std::optional<int> width;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(ErrorCode::kMalformedLine, line_no, e.what());
    }
    if (!j.is_object() || !j.contains("wrong") || !j.contains("correct") ||
        !j.contains("count") || !j["count"].is_number_unsigned()) {
      throw CorpusError(ErrorCode::kSchemaError, line_no,
                        "pool lines need wrong, correct and a positive count");
    }
    ErrorPattern p;
    p.wrong = TokensFromJson(j["wrong"], line_no);
    p.correct = TokensFromJson(j["correct"], line_no);
    p.n = j.contains("n") ? j["n"].get<int>() : default_n;
    if (width && *width != p.n) {
      throw CorpusError(ErrorCode::kMixedWidth, line_no,
                        "pool file mixes pattern widths");
    }
    width = p.n;
    entries.emplace_back(std::move(p), j["count"].get<std::uint64_t>());
  }
  PatternPool pool(width.value_or(default_n));
  for (const auto& [p, c] : entries) pool.Add(p, c);
  return pool;
}

PatternPool ReadPool(const std::filesystem::path& path, int default_n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  PatternPool pool = ParsePool(in, default_n);
  pool.AddProvenance(path.filename().string());
  return pool;
}

bool CorrectSidesOverlap(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return false;
  auto contains = [](const Tokens& hay, const Tokens& needle) {
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
           hay.end();
  };
  if (contains(a, b) || contains(b, a)) return true;
  // Suffix of x equal to a prefix of y.
  auto suffix_prefix = [](const Tokens& x, const Tokens& y) {
    const std::size_t max = std::min(x.size(), y.size());
    for (std::size_t len = 1; len <= max; ++len) {
      if (std::equal(x.end() - len, x.end(), y.begin())) return true;
    }
    return false;
  };
  return suffix_prefix(a, b) || suffix_prefix(b, a);
}

PatternSampler::PatternSampler(const PatternPool& pool, bool sendable_only) {
  std::uint64_t running = 0;
  for (const auto& [pattern, count] : pool.counts()) {
    if (sendable_only && !pattern.sendable()) continue;
    running += count;
    patterns_.push_back(pattern);
    cumulative_.push_back(running);
  }
  if (patterns_.empty()) {
    throw Error(ErrorCode::kEmptyPool, sendable_only
                                           ? "pool has no sendable patterns"
                                           : "pool is empty");
  }
}

const ErrorPattern& PatternSampler::SampleOne(Rng& rng) const {
  const std::uint64_t r = rng.Below(cumulative_.back());
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  return patterns_[it - cumulative_.begin()];
}

std::vector<ErrorPattern> PatternSampler::Sample(Rng& rng) const {
  const int length = rng.UniformInt(1, 2);
  if (length == 1) return {SampleOne(rng)};
  for (int attempt = 0; attempt <= kMaxOverlapRetries; ++attempt) {
    const ErrorPattern& a = SampleOne(rng);
    const ErrorPattern& b = SampleOne(rng);
    if (!CorrectSidesOverlap(a.correct, b.correct)) return {a, b};
    if (attempt == kMaxOverlapRetries) return {a};
  }
  return {};  // unreachable
}

std::vector<ErrorPattern> SamplePatterns(const PatternPool& pool, Rng& rng) {
  return PatternSampler(pool).Sample(rng);
}

}  // namespace gecaug
