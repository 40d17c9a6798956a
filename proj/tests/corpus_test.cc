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

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <sstream>

#include "gecaug/error.h"
#include "support/oracles.h"

namespace gecaug {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(TokensTest, SplitsOnSingleSpaces) {
  EXPECT_EQ(SplitTokens("a b  c"), (Tokens{"a", "b", "c"}));
  EXPECT_TRUE(SplitTokens("").empty());
  EXPECT_EQ(CodeOf([] { SplitTokens("a\tb"); }), ErrorCode::kInvalidToken);
}

TEST(TokensTest, Utf8Validation) {
  EXPECT_TRUE(IsValidUtf8("caf\xc3\xa9"));
  EXPECT_FALSE(IsValidUtf8("caf\xc3"));
  EXPECT_FALSE(IsValidUtf8("\xc0\xaf"));
  EXPECT_FALSE(IsValidUtf8("\xed\xa0\x80"));
  EXPECT_EQ(DecodeUtf8("\xc3\xa9x").size(), 2u);
}

TEST(TsvTest, ParsesPairsWithLineIds) {
  std::istringstream in("a b\ta c\nx\ty\n");
  const auto pairs = ParseParallelTsv(in);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].id, "1");
  EXPECT_EQ(pairs[0].source, (Tokens{"a", "b"}));
  EXPECT_EQ(pairs[0].target, (Tokens{"a", "c"}));
  EXPECT_EQ(pairs[1].id, "2");
}

TEST(TsvTest, RejectsBlankLines) {
  std::istringstream in("a b\ta c\n\nx\ty\n");
  EXPECT_EQ(CodeOf([&] { ParseParallelTsv(in); }), ErrorCode::kMalformedLine);
}

TEST(TsvTest, RejectsMalformedLines) {
  std::istringstream one_field("only one side\n");
  EXPECT_EQ(CodeOf([&] { ParseParallelTsv(one_field); }),
            ErrorCode::kMalformedLine);
  std::istringstream three("a\tb\tc\n");
  EXPECT_EQ(CodeOf([&] { ParseParallelTsv(three); }), ErrorCode::kMalformedLine);
  std::istringstream empty_side("a b\t\n");
  EXPECT_EQ(CodeOf([&] { ParseParallelTsv(empty_side); }), ErrorCode::kEmptySide);
  std::istringstream bad_utf8("a\xff\tb\n");
  EXPECT_EQ(CodeOf([&] { ParseParallelTsv(bad_utf8); }), ErrorCode::kInvalidUtf8);
}

TEST(TsvTest, ErrorCarriesLineNumber) {
  std::istringstream in("a\tb\nc\td\nbroken\n");
  try {
    ParseParallelTsv(in);
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(TsvTest, WriteReadRoundTrip) {
  std::istringstream in("x y z\tx z\nq\tq\n");
  const auto pairs = ParseParallelTsv(in);
  std::ostringstream out;
  WriteParallelTsv(pairs, out);
  EXPECT_EQ(out.str(), "x y z\tx z\nq\tq\n");
}

TEST(M2Test, ParsesAnnotatorsNoopsAndDeletions) {
  std::istringstream in(
      "S I likes the cats .\n"
      "A 1 2|||R:VERB:SVA|||like|||REQUIRED|||-NONE-|||0\n"
      "A 2 3|||U:DET|||-NONE-|||REQUIRED|||-NONE-|||0\n"
      "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||1\n"
      "\n"
      "S Fine .\n");
  const auto blocks = ParseM2(in);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].id, "1");
  ASSERT_EQ(blocks[0].edits.size(), 2u);
  ASSERT_EQ(blocks[0].edits.at(0).size(), 2u);
  EXPECT_TRUE(blocks[0].edits.at(0)[1].correction.empty());
  EXPECT_TRUE(blocks[0].edits.at(1).empty());
  EXPECT_EQ(blocks[0].Corrected(0), (Tokens{"I", "like", "cats", "."}));
  EXPECT_EQ(blocks[0].Corrected(1), blocks[0].source);
  EXPECT_TRUE(blocks[1].edits.empty());
}

TEST(M2Test, SortsEditsPerAnnotator) {
  std::istringstream in(
      "S a b c d\n"
      "A 3 4|||R:X|||D|||REQUIRED|||-NONE-|||0\n"
      "A 0 1|||R:X|||A|||REQUIRED|||-NONE-|||0\n");
  const auto blocks = ParseM2(in);
  EXPECT_EQ(blocks[0].edits.at(0)[0].span.start, 0);
  EXPECT_EQ(blocks[0].Corrected(0), (Tokens{"A", "b", "c", "D"}));
}

TEST(M2Test, RejectsBadInput) {
  std::istringstream oob("S a b\nA 1 3|||R:X|||c|||REQUIRED|||-NONE-|||0\n");
  EXPECT_EQ(CodeOf([&] { ParseM2(oob); }), ErrorCode::kSpanOutOfBounds);
  std::istringstream overlap(
      "S a b c\nA 0 2|||R:X|||x|||REQUIRED|||-NONE-|||0\n"
      "A 1 3|||R:X|||y|||REQUIRED|||-NONE-|||0\n");
  EXPECT_EQ(CodeOf([&] { ParseM2(overlap); }), ErrorCode::kOverlappingEdits);
  std::istringstream orphan("A 0 1|||R:X|||x|||REQUIRED|||-NONE-|||0\n");
  EXPECT_EQ(CodeOf([&] { ParseM2(orphan); }), ErrorCode::kMissingSentence);
  std::istringstream short_line("S a\nA 0 1|||R:X|||x\n");
  EXPECT_EQ(CodeOf([&] { ParseM2(short_line); }), ErrorCode::kMalformedLine);
}

TEST(M2Test, OverlapAcrossAnnotatorsIsFine) {
  std::istringstream in(
      "S a b c\nA 0 2|||R:X|||x|||REQUIRED|||-NONE-|||0\n"
      "A 1 3|||R:X|||y|||REQUIRED|||-NONE-|||1\n");
  EXPECT_EQ(ParseM2(in)[0].edits.size(), 2u);
}

TEST(M2Test, WriteReadRoundTrip) {
  std::ifstream file(testing::DataPath("golden5.m2"));
  const auto blocks = ParseM2(file);
  std::ostringstream out;
  WriteM2(blocks, out);
  std::istringstream again(out.str());
  EXPECT_EQ(ParseM2(again), blocks);
}

TEST(M2Test, InsertionSpansAreEmpty) {
  std::istringstream in(
      "S move one place\nA 1 1|||M:PREP|||from|||REQUIRED|||-NONE-|||0\n");
  const auto blocks = ParseM2(in);
  EXPECT_EQ(blocks[0].Corrected(0), (Tokens{"move", "from", "one", "place"}));
}

TEST(JsonlTest, RoundTripKeepsMeta) {
  ParallelExample ex{"a-1", {"x", "y"}, {"x", "z"}, {{"origin", "w"}}};
  const std::string line = ToJsonlLine(ex);
  EXPECT_EQ(line,
            R"({"id":"a-1","source":"x y","target":"x z","meta":{"origin":"w"}})");
  std::istringstream in(line + "\n\n");
  const auto back = ParseJsonl(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], ex);
}

TEST(JsonlTest, SchemaErrors) {
  std::istringstream missing(R"({"id":"1","source":"a"})" "\n");
  EXPECT_EQ(CodeOf([&] { ParseJsonl(missing); }), ErrorCode::kSchemaError);
  std::istringstream not_json("{nope\n");
  EXPECT_EQ(CodeOf([&] { ParseJsonl(not_json); }), ErrorCode::kMalformedLine);
  std::istringstream empty(R"({"source":"","target":"a"})" "\n");
  EXPECT_EQ(CodeOf([&] { ParseJsonl(empty); }), ErrorCode::kEmptySide);
}

TEST(ReadParallelCorpusTest, DispatchesOnExtension) {
  const auto tsv = ReadParallelCorpus(testing::DataPath("fixture100.tsv"));
  const auto m2 = ReadParallelCorpus(testing::DataPath("fixture100.m2"));
  ASSERT_EQ(tsv.size(), 100u);
  ASSERT_EQ(m2.size(), 100u);
  for (std::size_t i = 0; i < tsv.size(); ++i) {
    EXPECT_EQ(tsv[i].source, m2[i].source) << i;
    EXPECT_EQ(tsv[i].target, m2[i].target) << i;
  }
  EXPECT_EQ(CodeOf([] { ReadParallelCorpus("corpus.csv"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ReadParallelCorpus("/nonexistent/x.tsv"); }),
            ErrorCode::kIo);
}

}  // namespace
}  // namespace gecaug
