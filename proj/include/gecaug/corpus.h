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

#ifndef GECAUG_CORPUS_H_
#define GECAUG_CORPUS_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gecaug/tokens.h"

namespace gecaug {

// A tokenized (source, target) sentence pair. Both sides are non-empty.
struct ParallelExample {
  std::string id;
  Tokens source;
  Tokens target;
  std::map<std::string, std::string> meta;

  bool operator==(const ParallelExample&) const = default;
};

// One `A` line of an M2 block. An empty correction is a deletion.
struct GoldEdit {
  Span span;
  std::string type;
  Tokens correction;
  std::string required = "REQUIRED";
  std::string comment = "-NONE-";

  bool operator==(const GoldEdit&) const = default;
};

// An M2 block: the source sentence plus each annotator's edits, sorted by
// span start and non-overlapping. An annotator whose only line is a noop
// is present with an empty edit list.
struct AnnotatedExample {
  std::string id;
  Tokens source;
  std::map<int, std::vector<GoldEdit>> edits;

  // Source with `annotator`'s edits applied.
  Tokens Corrected(int annotator) const;

  bool operator==(const AnnotatedExample&) const = default;
};

std::vector<ParallelExample> ParseParallelTsv(std::istream& in);
std::vector<ParallelExample> ReadParallelTsv(const std::filesystem::path& path);
void WriteParallelTsv(std::span<const ParallelExample> examples,
                      std::ostream& out);
void WriteParallelTsv(std::span<const ParallelExample> examples,
                      const std::filesystem::path& path);

std::vector<AnnotatedExample> ParseM2(std::istream& in);
std::vector<AnnotatedExample> ReadM2(const std::filesystem::path& path);
void WriteM2(std::span<const AnnotatedExample> examples, std::ostream& out);
void WriteM2(std::span<const AnnotatedExample> examples,
             const std::filesystem::path& path);

// JSONL keys: id, source, target (space-joined strings), optional meta.
std::string ToJsonlLine(const ParallelExample& example);
std::vector<ParallelExample> ParseJsonl(std::istream& in);
std::vector<ParallelExample> ReadJsonl(const std::filesystem::path& path);
void WriteJsonl(std::span<const ParallelExample> examples, std::ostream& out);
void WriteJsonl(std::span<const ParallelExample> examples,
                const std::filesystem::path& path);

// Dispatches on extension: .tsv, .jsonl, or .m2 (annotator with the lowest
// id supplies the target side).
std::vector<ParallelExample> ReadParallelCorpus(
    const std::filesystem::path& path);

// Validates and tokenizes one side of a pair. Errors carry `line`.
Tokens TokenizeField(std::string_view text, std::size_t line);

}  // namespace gecaug

#endif  // GECAUG_CORPUS_H_
