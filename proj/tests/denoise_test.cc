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

#include "gecaug/denoise.h"

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <mutex>
#include <set>

#include "gecaug/align.h"
#include "gecaug/error.h"
#include "gecaug/synth.h"
#include "support/fake_server.h"
#include "support/oracles.h"

namespace gecaug {
namespace {

std::vector<SyntheticSample> StubCorpus(std::size_t count, std::uint64_t seed) {
  PatternPool pool(1);
  pool.Add({{"a"}, {"the"}, 1}, 6);
  pool.Add({{}, {"to"}, 1}, 4);
  pool.Add({{"go"}, {"went"}, 1}, 3);
  pool.Add({{"is"}, {"are"}, 1}, 2);
  SynthesisConfig config;
  config.seed = seed;
  config.count = count;
  return Synthesize(pool, StubGenerator(seed), config).samples;
}

std::vector<ParallelExample> Pairs(const std::vector<SyntheticSample>& samples) {
  std::vector<ParallelExample> out;
  for (const auto& s : samples) out.push_back(s.AsPair());
  return out;
}

TEST(RelabelTest, IdentityYieldsEditFreeCorpus) {
  const auto samples = StubCorpus(300, 1);
  const auto out = Relabel(samples, IdentityCorrector());
  ASSERT_EQ(out.size(), samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].id, samples[i].id);
    EXPECT_EQ(out[i].source, samples[i].source);
    EXPECT_EQ(out[i].target, samples[i].source);
    EXPECT_TRUE(ExtractEdits(out[i]).empty());
    EXPECT_EQ(out[i].meta.at(kRelabelMetaKey),
              samples[i].planted.empty() ? "target" : "source");
  }
}

TEST(RelabelTest, PlantedOracleRecoversGeneratedSentences) {
  const auto samples = StubCorpus(500, 2);
  const testing::PlantedOracleCorrector oracle(samples);
  RelabelOptions options;
  options.workers = 4;
  const auto out = Relabel(samples, oracle, options);
  ASSERT_EQ(out.size(), samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].source, samples[i].source);
    EXPECT_EQ(out[i].target, samples[i].target) << out[i].id;
    EXPECT_EQ(out[i].meta.at(kRelabelMetaKey), "target");
  }
}

class ChangingCorrector : public Corrector {
 public:
  CorrectionResult Correct(const std::string&, const std::string& text) const override {
    return {true, text + " !", 1, ""};
  }
  std::string id() const override { return "bang"; }
};

TEST(RelabelTest, ChangedMetadata) {
  const auto out = Relabel(Pairs(StubCorpus(20, 3)), ChangingCorrector());
  for (const auto& p : out) EXPECT_EQ(p.meta.at(kRelabelMetaKey), "changed");
}

TEST(DiffStatsTest, SameCorpusIsAllZero) {
  const auto pairs = Pairs(StubCorpus(100, 4));
  const RelabelDiffReport r = RelabelDiffStats(pairs, pairs);
  EXPECT_EQ(r.targets_changed, 0u);
  EXPECT_EQ(r.changed_tokens, 0u);
  EXPECT_EQ(r.changed_fraction(), 0.0);
  EXPECT_EQ(r.token_change_rate(), 0.0);
  EXPECT_EQ(r.errorful_before, r.errorful_after);
}

TEST(DiffStatsTest, IdentityChangesExactlyThePlantedSamples) {
  const auto samples = StubCorpus(1000, 5);
  const auto before = Pairs(samples);
  const auto after = Relabel(samples, IdentityCorrector());
  const RelabelDiffReport r = RelabelDiffStats(before, after);
  std::size_t planted = 0;
  for (const auto& s : samples) planted += !s.planted.empty();
  EXPECT_EQ(r.targets_changed, planted);
  EXPECT_DOUBLE_EQ(r.changed_fraction(), static_cast<double>(planted) / 1000.0);
  EXPECT_EQ(r.errorful_after, 0u);
  EXPECT_EQ(r.errorful_before, planted);
  EXPECT_GT(r.changed_tokens, 0u);
}

TEST(DiffStatsTest, IdMismatch) {
  auto a = Pairs(StubCorpus(10, 6));
  auto b = a;
  b[4].id = "other";
  try {
    RelabelDiffStats(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIdMismatch);
  }
  b.pop_back();
  EXPECT_THROW(RelabelDiffStats(a, b), Error);
}

// Fails on one id until disarmed; counts calls per id.
class FlakyCorrector : public Corrector {
 public:
  explicit FlakyCorrector(std::string fail_id) : fail_id_(std::move(fail_id)) {}
  CorrectionResult Correct(const std::string& id, const std::string& text) const override {
    {
      std::lock_guard lock(mu_);
      calls_.insert(id);
    }
    if (armed_ && id == fail_id_) return {false, "", 5, "HTTP 503"};
    return {true, text, 1, ""};
  }
  std::string id() const override { return "flaky"; }

  void Disarm() { armed_ = false; }
  std::set<std::string> TakeCalls() {
    std::lock_guard lock(mu_);
    return std::exchange(calls_, {});
  }

 private:
  std::string fail_id_;
  std::atomic<bool> armed_{true};
  mutable std::mutex mu_;
  mutable std::set<std::string> calls_;
};

TEST(CheckpointTest, ResumesAfterFailure) {
  const auto pairs = Pairs(StubCorpus(45, 7));
  const auto dir = testing::ScratchDir("checkpoint");
  RelabelOptions options;
  options.checkpoint = dir / "ckpt.json";
  options.checkpoint_every = 10;
  options.workers = 2;

  FlakyCorrector flaky(pairs[24].id);
  try {
    Relabel(pairs, flaky, options);
    FAIL();
  } catch (const RelabelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
    EXPECT_EQ(e.completed(), 20u);
    EXPECT_EQ(e.last_completed_id(), pairs[19].id);
    EXPECT_NE(std::string(e.what()).find(pairs[19].id), std::string::npos);
  }
  std::ifstream state(dir / "ckpt.json");
  const auto j = nlohmann::json::parse(state);
  EXPECT_EQ(j["completed"], 20);
  EXPECT_EQ(j["last_completed_id"], pairs[19].id);

  flaky.Disarm();
  flaky.TakeCalls();
  const auto resumed = Relabel(pairs, flaky, options);
  const auto calls = flaky.TakeCalls();
  EXPECT_EQ(calls.size(), 25u);
  EXPECT_EQ(calls.count(pairs[0].id), 0u);
  EXPECT_EQ(resumed, Relabel(pairs, IdentityCorrector()));
}

TEST(CheckpointTest, RejectsForeignCorpus) {
  const auto pairs = Pairs(StubCorpus(30, 8));
  const auto dir = testing::ScratchDir("checkpoint-foreign");
  RelabelOptions options;
  options.checkpoint = dir / "ckpt.json";
  options.checkpoint_every = 10;
  Relabel(pairs, IdentityCorrector(), options);
  auto other = pairs;
  other[0].id = "someone-else";
  try {
    Relabel(other, IdentityCorrector(), options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIdMismatch);
  }
}

TEST(HttpCorrectorTest, ProtocolAndMalformedReplies) {
  testing::FakeServer fake;
  nlohmann::json seen;
  fake.server.Post("/fix", [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    res.set_content(nlohmann::json{{"text", "fixed " + seen["text"].get<std::string>()}}
                        .dump(),
                    "application/json");
  });
  fake.server.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"text\": ", "application/json");
  });
  fake.Start();
  const RetryPolicy fast{3, std::chrono::milliseconds(1), 2.0};

  const HttpCorrector good({fake.Url("/fix"), "", std::chrono::milliseconds(2000)}, fast);
  const auto r = good.Correct("id-1", "a b");
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.text, "fixed a b");
  EXPECT_EQ(seen, (nlohmann::json{{"id", "id-1"}, {"text", "a b"}}));

  const HttpCorrector bad({fake.Url("/broken"), "", std::chrono::milliseconds(2000)}, fast);
  EXPECT_FALSE(bad.Correct("id-1", "a b").ok);
  const std::vector<ParallelExample> pairs = {{"p1", {"a"}, {"b"}, {}}};
  try {
    Relabel(pairs, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
  }
}

}  // namespace
}  // namespace gecaug
