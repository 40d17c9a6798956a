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

#include "gecaug/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gecaug/error.h"
#include "json.hpp"

namespace gecaug {
namespace {

constexpr std::string_view kSep = "|||";

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void CheckWritten(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<std::string_view> SplitOn(std::string_view text,
                                      std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

bool ParseInt(std::string_view text, int* value) {
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), *value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

Tokens ApplyGoldEdits(const Tokens& source, const std::vector<GoldEdit>& edits) {
  Tokens out;
  int cursor = 0;
  for (const GoldEdit& e : edits) {
    out.insert(out.end(), source.begin() + cursor, source.begin() + e.span.start);
    out.insert(out.end(), e.correction.begin(), e.correction.end());
    cursor = e.span.end;
  }
  out.insert(out.end(), source.begin() + cursor, source.end());
  return out;
}

struct M2Block {
  AnnotatedExample example;
  bool open = false;
};

void FinishBlock(M2Block& block, std::size_t line,
                 std::vector<AnnotatedExample>& out) {
  if (!block.open) return;
  for (auto& [annotator, edits] : block.example.edits) {
    std::stable_sort(edits.begin(), edits.end(),
                     [](const GoldEdit& a, const GoldEdit& b) {
                       return a.span < b.span;
                     });
    for (std::size_t i = 1; i < edits.size(); ++i) {
      const Span prev = edits[i - 1].span;
      const Span cur = edits[i].span;
      if (cur.start < prev.end || (prev.empty() && cur == prev)) {
        throw CorpusError(ErrorCode::kOverlappingEdits, line,
                          "annotator " + std::to_string(annotator) +
                              " has overlapping edits");
      }
    }
  }
  out.push_back(std::move(block.example));
  block = M2Block{};
}

void ParseALine(std::string_view body, std::size_t line_no, M2Block& block) {
  const auto fields = SplitOn(body, kSep);
  if (fields.size() < 6) {
    throw CorpusError(ErrorCode::kMalformedLine, line_no,
                      "A line needs 6 '|||'-separated fields");
  }
  const auto span_parts = SplitOn(fields[0], " ");
  int start = 0;
  int end = 0;
  int annotator = 0;
  if (span_parts.size() != 2 || !ParseInt(span_parts[0], &start) ||
      !ParseInt(span_parts[1], &end)) {
    throw CorpusError(ErrorCode::kMalformedLine, line_no, "bad span field");
  }
  if (!ParseInt(fields[5], &annotator)) {
    throw CorpusError(ErrorCode::kMalformedLine, line_no,
                      "bad annotator field");
  }
  auto& edits = block.example.edits[annotator];
  if (fields[1] == "noop" || (start == -1 && end == -1)) return;
  const int len = static_cast<int>(block.example.source.size());
  if (start < 0 || start > end || end > len) {
    throw CorpusError(ErrorCode::kSpanOutOfBounds, line_no,
                      "span " + std::to_string(start) + " " +
                          std::to_string(end) + " outside sentence of " +
                          std::to_string(len) + " tokens");
  }
  GoldEdit edit;
  edit.span = {start, end};
  edit.type = std::string(fields[1]);
  if (fields[2] != "-NONE-") edit.correction = TokenizeField(fields[2], line_no);
  edit.required = std::string(fields[3]);
  edit.comment = std::string(fields[4]);
  edits.push_back(std::move(edit));
}

}  // namespace

Tokens TokenizeField(std::string_view text, std::size_t line) {
  if (!IsValidUtf8(text)) {
    throw CorpusError(ErrorCode::kInvalidUtf8, line, "invalid UTF-8");
  }
  try {
    return SplitTokens(text);
  } catch (const Error& e) {
    throw CorpusError(e.code(), line, e.what());
  }
}

Tokens AnnotatedExample::Corrected(int annotator) const {
  const auto it = edits.find(annotator);
  if (it == edits.end()) return source;
  return ApplyGoldEdits(source, it->second);
}

std::vector<ParallelExample> ParseParallelTsv(std::istream& in) {
  std::vector<ParallelExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitOn(line, "\t");
    if (fields.size() != 2) {
      throw CorpusError(ErrorCode::kMalformedLine, line_no,
                        "expected 2 tab-separated fields, got " +
                            std::to_string(fields.size()));
    }
    ParallelExample ex;
    ex.id = std::to_string(line_no);
    ex.source = TokenizeField(fields[0], line_no);
    ex.target = TokenizeField(fields[1], line_no);
    if (ex.source.empty() || ex.target.empty()) {
      throw CorpusError(ErrorCode::kEmptySide, line_no, "empty side");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<ParallelExample> ReadParallelTsv(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ParseParallelTsv(in);
}

void WriteParallelTsv(std::span<const ParallelExample> examples,
                      std::ostream& out) {
  for (const auto& ex : examples) {
    out << JoinTokens(ex.source) << '\t' << JoinTokens(ex.target) << '\n';
  }
}

void WriteParallelTsv(std::span<const ParallelExample> examples,
                      const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteParallelTsv(examples, out);
  CheckWritten(out, path);
}

std::vector<AnnotatedExample> ParseM2(std::istream& in) {
  std::vector<AnnotatedExample> out;
  M2Block block;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      FinishBlock(block, line_no, out);
      continue;
    }
    if (line[0] == 'S' && (line.size() == 1 || line[1] == ' ')) {
      FinishBlock(block, line_no, out);
      block.open = true;
      block.example.id = std::to_string(out.size() + 1);
      block.example.source =
          TokenizeField(std::string_view(line).substr(line.size() > 1 ? 2 : 1),
                        line_no);
      if (block.example.source.empty()) {
        throw CorpusError(ErrorCode::kEmptySide, line_no, "empty S line");
      }
    } else if (line[0] == 'A' && line.size() > 1 && line[1] == ' ') {
      if (!block.open) {
        throw CorpusError(ErrorCode::kMissingSentence, line_no,
                          "A line before any S line");
      }
      ParseALine(std::string_view(line).substr(2), line_no, block);
    } else {
      throw CorpusError(ErrorCode::kMalformedLine, line_no,
                        "expected S or A line");
    }
  }
  FinishBlock(block, line_no, out);
  return out;
}

std::vector<AnnotatedExample> ReadM2(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ParseM2(in);
}

void WriteM2(std::span<const AnnotatedExample> examples, std::ostream& out) {
  for (const auto& ex : examples) {
    out << "S " << JoinTokens(ex.source) << '\n';
    for (const auto& [annotator, edits] : ex.edits) {
      if (edits.empty()) {
        out << "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||" << annotator
            << '\n';
        continue;
      }
      for (const GoldEdit& e : edits) {
        out << "A " << e.span.start << ' ' << e.span.end << kSep << e.type
            << kSep
            << (e.correction.empty() ? std::string("-NONE-")
                                     : JoinTokens(e.correction))
            << kSep << e.required << kSep << e.comment << kSep << annotator
            << '\n';
      }
    }
    out << '\n';
  }
}

void WriteM2(std::span<const AnnotatedExample> examples,
             const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteM2(examples, out);
  CheckWritten(out, path);
}

std::string ToJsonlLine(const ParallelExample& example) {
  nlohmann::ordered_json j;
  j["id"] = example.id;
  j["source"] = JoinTokens(example.source);
  j["target"] = JoinTokens(example.target);
  if (!example.meta.empty()) j["meta"] = example.meta;
  return j.dump();
}

std::vector<ParallelExample> ParseJsonl(std::istream& in) {
  std::vector<ParallelExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!IsValidUtf8(line)) {
      throw CorpusError(ErrorCode::kInvalidUtf8, line_no, "invalid UTF-8");
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(ErrorCode::kMalformedLine, line_no, e.what());
    }
    if (!j.is_object()) {
      throw CorpusError(ErrorCode::kSchemaError, line_no, "not an object");
    }
    for (const char* key : {"source", "target"}) {
      if (!j.contains(key) || !j[key].is_string()) {
        throw CorpusError(ErrorCode::kSchemaError, line_no,
                          std::string("missing string field '") + key + "'");
      }
    }
    ParallelExample ex;
    if (j.contains("id")) {
      ex.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    } else {
      ex.id = std::to_string(line_no);
    }
    ex.source = TokenizeField(j["source"].get<std::string>(), line_no);
    ex.target = TokenizeField(j["target"].get<std::string>(), line_no);
    if (ex.source.empty() || ex.target.empty()) {
      throw CorpusError(ErrorCode::kEmptySide, line_no, "empty side");
    }
    if (j.contains("meta")) {
      if (!j["meta"].is_object()) {
        throw CorpusError(ErrorCode::kSchemaError, line_no,
                          "'meta' must be an object");
      }
      for (const auto& [k, v] : j["meta"].items()) {
        ex.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<ParallelExample> ReadJsonl(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ParseJsonl(in);
}

void WriteJsonl(std::span<const ParallelExample> examples, std::ostream& out) {
  for (const auto& ex : examples) out << ToJsonlLine(ex) << '\n';
}

void WriteJsonl(std::span<const ParallelExample> examples,
                const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteJsonl(examples, out);
  CheckWritten(out, path);
}

std::vector<ParallelExample> ReadParallelCorpus(
    const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".tsv") return ReadParallelTsv(path);
  if (ext == ".jsonl") return ReadJsonl(path);
  if (ext == ".m2") {
    std::vector<ParallelExample> out;
    for (const auto& ann : ReadM2(path)) {
      ParallelExample ex;
      ex.id = ann.id;
      ex.source = ann.source;
      ex.target = ann.edits.empty() ? ann.source
                                    : ann.Corrected(ann.edits.begin()->first);
      if (ex.target.empty()) {
        throw Error(ErrorCode::kEmptySide,
                    path.string() + ": sentence " + ex.id +
                        " corrects to an empty sentence");
      }
      out.push_back(std::move(ex));
    }
    return out;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown corpus extension '" + ext + "' for " + path.string());
}

}  // namespace gecaug
