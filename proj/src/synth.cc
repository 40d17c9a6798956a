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

#include "gecaug/synth.h"

#include <algorithm>
#include <exception>
#include <fstream>
#include <istream>
#include <sstream>

#include "gecaug/error.h"

namespace gecaug {
namespace {

struct Occurrence {
  Span span;
  std::size_t pattern;
};

bool Overlaps(Span a, Span b) {
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

// Generated text may use any whitespace; it is normalized here.
Tokens SplitGenerated(const std::string& text) {
  Tokens out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

nlohmann::ordered_json PatternJson(const ErrorPattern& p) {
  nlohmann::ordered_json j;
  j["wrong"] = p.wrong;
  j["correct"] = p.correct;
  return j;
}

ErrorPattern PatternFromJson(const nlohmann::json& j, int n, std::size_t line) {
  if (!j.is_object() || !j.contains("wrong") || !j.contains("correct")) {
    throw CorpusError(ErrorCode::kSchemaError, line,
                      "pattern needs 'wrong' and 'correct'");
  }
  ErrorPattern p;
  p.wrong = j["wrong"].get<Tokens>();
  p.correct = j["correct"].get<Tokens>();
  p.n = n;
  return p;
}

}  // namespace

MatchResult MatchPatterns(const Tokens& sentence,
                          std::span<const ErrorPattern> patterns) {
  std::vector<Occurrence> occurrences;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const Tokens& needle = patterns[p].correct;
    if (needle.empty() || needle.size() > sentence.size()) continue;
    for (std::size_t i = 0; i + needle.size() <= sentence.size(); ++i) {
      if (std::equal(needle.begin(), needle.end(), sentence.begin() + i)) {
        occurrences.push_back(
            {{static_cast<int>(i), static_cast<int>(i + needle.size())}, p});
      }
    }
  }
  // Leftmost first; at equal starts the longer run, then pattern order
  // by value so the result does not depend on the input order.
  std::stable_sort(occurrences.begin(), occurrences.end(),
                   [&](const Occurrence& a, const Occurrence& b) {
                     if (a.span.start != b.span.start) {
                       return a.span.start < b.span.start;
                     }
                     if (a.span.size() != b.span.size()) {
                       return a.span.size() > b.span.size();
                     }
                     return patterns[a.pattern] < patterns[b.pattern];
                   });

  std::vector<bool> done(patterns.size(), false);
  MatchResult result;
  for (const Occurrence& occ : occurrences) {
    if (done[occ.pattern]) continue;
    const bool clash = std::any_of(
        result.matched.begin(), result.matched.end(),
        [&](const PatternMatch& m) { return Overlaps(m.span, occ.span); });
    if (clash) continue;
    done[occ.pattern] = true;
    result.matched.push_back({patterns[occ.pattern], occ.span});
  }
  std::sort(result.matched.begin(), result.matched.end(),
            [](const PatternMatch& a, const PatternMatch& b) {
              return a.span.start < b.span.start;
            });
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    if (!done[p]) result.unmatched.push_back(patterns[p]);
  }
  return result;
}

ParallelExample SyntheticSample::AsPair() const {
  ParallelExample ex;
  ex.id = id;
  ex.source = source;
  ex.target = target;
  return ex;
}

SyntheticSample ApplySubstitution(const Tokens& sentence,
                                  std::span<const PatternMatch> matches) {
  std::vector<PatternMatch> sorted(matches.begin(), matches.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const PatternMatch& a, const PatternMatch& b) {
              return a.span.start < b.span.start;
            });
  SyntheticSample sample;
  sample.target = sentence;
  int cursor = 0;
  for (const PatternMatch& m : sorted) {
    if (m.span.start < cursor) {
      throw Error(ErrorCode::kOverlappingEdits, "matches overlap");
    }
    sample.source.insert(sample.source.end(), sentence.begin() + cursor,
                         sentence.begin() + m.span.start);
    const int at = static_cast<int>(sample.source.size());
    sample.source.insert(sample.source.end(), m.pattern.wrong.begin(),
                         m.pattern.wrong.end());
    sample.planted.push_back(
        {m.pattern, {at, static_cast<int>(sample.source.size())}});
    cursor = m.span.end;
  }
  sample.source.insert(sample.source.end(), sentence.begin() + cursor,
                       sentence.end());
  return sample;
}

SyntheticSample Substitute(const Tokens& sentence,
                           std::span<const PatternMatch> matches, Rng& rng,
                           double error_rate) {
  if (rng.Bernoulli(error_rate)) return ApplySubstitution(sentence, matches);
  SyntheticSample sample;
  sample.target = sentence;
  sample.source = sentence;
  return sample;
}

Tokens RestoreTarget(const SyntheticSample& sample) {
  Tokens out;
  int cursor = 0;
  for (const PlantedPattern& p : sample.planted) {
    out.insert(out.end(), sample.source.begin() + cursor,
               sample.source.begin() + p.span.start);
    out.insert(out.end(), p.pattern.correct.begin(), p.pattern.correct.end());
    cursor = p.span.end;
  }
  out.insert(out.end(), sample.source.begin() + cursor, sample.source.end());
  return out;
}

void SynthesisStats::Merge(const SynthesisStats& o) {
  samples += o.samples;
  attempts += o.attempts;
  generation_ok += o.generation_ok;
  refused += o.refused;
  transport_error += o.transport_error;
  no_match += o.no_match;
  requested_patterns += o.requested_patterns;
  matched_patterns += o.matched_patterns;
  unmatched_patterns += o.unmatched_patterns;
  planted_patterns += o.planted_patterns;
  errorful_samples += o.errorful_samples;
}

double SynthesisStats::unmatched_rate() const {
  return requested_patterns == 0
             ? 0.0
             : static_cast<double>(unmatched_patterns) /
                   static_cast<double>(requested_patterns);
}

double SynthesisStats::errorful_fraction() const {
  return samples == 0 ? 0.0
                      : static_cast<double>(errorful_samples) /
                            static_cast<double>(samples);
}

nlohmann::ordered_json SynthesisStats::ToJson() const {
  nlohmann::ordered_json j;
  j["samples"] = samples;
  j["attempts"] = attempts;
  j["generation_ok"] = generation_ok;
  j["failures"] = {{"refused", refused},
                   {"transport_error", transport_error},
                   {"no_match", no_match}};
  j["requested_patterns"] = requested_patterns;
  j["matched_patterns"] = matched_patterns;
  j["unmatched_patterns"] = unmatched_patterns;
  j["unmatched_rate"] = unmatched_rate();
  j["planted_patterns"] = planted_patterns;
  j["errorful_samples"] = errorful_samples;
  j["errorful_fraction"] = errorful_fraction();
  return j;
}

namespace internal {

std::size_t AttemptBudget(const SynthesisConfig& config) {
  return config.max_attempts.value_or(3 * config.count);
}

SlotOutcome SynthesizeSlot(std::size_t slot, const PatternSampler& sampler,
                           const Generator& backend,
                           const SynthesisConfig& config, std::size_t budget,
                           std::size_t slot_cap,
                           std::atomic<std::size_t>& attempts_used) {
  SlotOutcome out;
  Rng rng = Rng::ForStream(config.seed, slot);
  const bool errorful = rng.Bernoulli(config.error_rate);
  const std::string id = config.id_prefix + "-" + std::to_string(slot + 1);

  for (std::size_t attempt = 1; attempt <= slot_cap; ++attempt) {
    if (attempts_used.fetch_add(1) + 1 > budget) break;
    ++out.stats.attempts;

    const std::vector<ErrorPattern> patterns = sampler.Sample(rng);
    std::vector<Tokens> corrects;
    for (const auto& p : patterns) corrects.push_back(p.correct);
    const GenerationRequest request =
        AssembleInput(corrects, rng, id + "#" + std::to_string(attempt));

    const GenerationResult gen = backend.Generate(request);
    if (gen.status == GenerationStatus::kTransportError) {
      ++out.stats.transport_error;
      continue;
    }
    Tokens sentence;
    if (gen.status == GenerationStatus::kOk && IsValidUtf8(gen.text)) {
      sentence = SplitGenerated(gen.text);
    }
    if (sentence.empty()) {
      ++out.stats.refused;
      continue;
    }
    ++out.stats.generation_ok;

    const MatchResult match = MatchPatterns(sentence, patterns);
    out.stats.requested_patterns += patterns.size();
    out.stats.matched_patterns += match.matched.size();
    out.stats.unmatched_patterns += match.unmatched.size();

    SyntheticSample sample;
    if (errorful) {
      if (match.matched.empty()) {
        ++out.stats.no_match;
        continue;
      }
      sample = ApplySubstitution(sentence, match.matched);
      if (sample.source.empty()) {
        // Planting would delete the whole sentence.
        ++out.stats.no_match;
        continue;
      }
      ++out.stats.errorful_samples;
      out.stats.planted_patterns += sample.planted.size();
    } else {
      sample.target = sentence;
      sample.source = sentence;
    }
    sample.id = id;
    sample.requested = patterns;
    sample.generator_id = backend.id();
    ++out.stats.samples;
    out.sample = std::move(sample);
    return out;
  }
  return out;
}

}  // namespace internal

SynthesisResult Synthesize(const PatternPool& pool, const Generator& backend,
                           const SynthesisConfig& config) {
  if (config.count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "count must be positive");
  }
  if (!(config.error_rate >= 0.0 && config.error_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "error rate must be in [0, 1]");
  }
  if (pool.empty()) throw Error(ErrorCode::kEmptyPool, "pool is empty");
  const PatternSampler sampler(pool, /*sendable_only=*/true);

  const std::size_t budget = internal::AttemptBudget(config);
  const std::size_t slot_cap =
      budget >= config.count ? budget - config.count + 1 : 1;
  std::atomic<std::size_t> attempts_used{0};

  const auto count = static_cast<std::int64_t>(config.count);
  std::vector<internal::SlotOutcome> outcomes(config.count);
  std::vector<std::exception_ptr> errors(config.count);

#pragma omp parallel for num_threads(std::max(1, config.workers)) schedule(dynamic, 16)
  for (std::int64_t slot = 0; slot < count; ++slot) {
    try {
      outcomes[slot] = internal::SynthesizeSlot(
          slot, sampler, backend, config, budget, slot_cap, attempts_used);
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SynthesisResult result;
  std::size_t failed_slots = 0;
  for (auto& o : outcomes) {
    result.stats.Merge(o.stats);
    if (o.sample) {
      result.samples.push_back(std::move(*o.sample));
    } else {
      ++failed_slots;
    }
  }
  if (failed_slots > 0) {
    throw Error(ErrorCode::kRetryBudgetExhausted,
                "retry budget of " + std::to_string(budget) +
                    " attempts exhausted with " + std::to_string(failed_slots) +
                    " samples missing (refused=" +
                    std::to_string(result.stats.refused) +
                    ", transport_error=" +
                    std::to_string(result.stats.transport_error) +
                    ", no_match=" + std::to_string(result.stats.no_match) + ")");
  }
  return result;
}

std::string ToJsonlLine(const SyntheticSample& sample) {
  nlohmann::ordered_json j;
  j["id"] = sample.id;
  j["source"] = JoinTokens(sample.source);
  j["target"] = JoinTokens(sample.target);
  auto planted = nlohmann::ordered_json::array();
  for (const auto& p : sample.planted) {
    auto pj = PatternJson(p.pattern);
    pj["span"] = {p.span.start, p.span.end};
    planted.push_back(std::move(pj));
  }
  j["planted"] = std::move(planted);
  auto requested = nlohmann::ordered_json::array();
  for (const auto& p : sample.requested) requested.push_back(PatternJson(p));
  j["requested"] = std::move(requested);
  j["generator"] = sample.generator_id;
  const int n = !sample.requested.empty() ? sample.requested.front().n
                : !sample.planted.empty() ? sample.planted.front().pattern.n
                                          : 1;
  j["n"] = n;
  return j.dump();
}

void WriteSyntheticJsonl(std::span<const SyntheticSample> samples,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& s : samples) out << ToJsonlLine(s) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<SyntheticSample> ParseSyntheticJsonl(std::istream& in) {
  std::vector<SyntheticSample> out;
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
    if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
        !j["source"].is_string() || !j["target"].is_string()) {
      throw CorpusError(ErrorCode::kSchemaError, line_no,
                        "synthetic lines need string source and target");
    }
    try {
      SyntheticSample s;
      const int n = j.value("n", 1);
      s.id = j.contains("id") ? j["id"].get<std::string>()
                              : std::to_string(line_no);
      s.source = TokenizeField(j["source"].get<std::string>(), line_no);
      s.target = TokenizeField(j["target"].get<std::string>(), line_no);
      for (const auto& pj : j.value("planted", nlohmann::json::array())) {
        PlantedPattern p;
        p.pattern = PatternFromJson(pj, n, line_no);
        const auto span = pj.at("span");
        p.span = {span.at(0).get<int>(), span.at(1).get<int>()};
        if (p.span.start < 0 || p.span.start > p.span.end ||
            p.span.end > static_cast<int>(s.source.size())) {
          throw CorpusError(ErrorCode::kSpanOutOfBounds, line_no,
                            "planted span outside source");
        }
        s.planted.push_back(std::move(p));
      }
      for (const auto& pj : j.value("requested", nlohmann::json::array())) {
        s.requested.push_back(PatternFromJson(pj, n, line_no));
      }
      s.generator_id = j.value("generator", "");
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(ErrorCode::kSchemaError, line_no, e.what());
    }
  }
  return out;
}

std::vector<SyntheticSample> ReadSyntheticJsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseSyntheticJsonl(in);
}

}  // namespace gecaug
