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

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>

#include "gecaug/align.h"

namespace gecaug {
namespace {

namespace fs = std::filesystem;

fs::path PartialPath(const fs::path& checkpoint) {
  return fs::path(checkpoint.string() + ".partial.jsonl");
}

struct Resume {
  std::vector<ParallelExample> done;
};

Resume LoadCheckpoint(const fs::path& checkpoint,
                      std::span<const ParallelExample> corpus) {
  Resume resume;
  if (!fs::exists(checkpoint)) return resume;
  std::ifstream in(checkpoint);
  nlohmann::json state;
  try {
    state = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError,
                "unreadable checkpoint " + checkpoint.string() + ": " + e.what());
  }
  const std::size_t completed = state.value("completed", std::size_t{0});
  if (completed == 0) return resume;
  resume.done = ReadJsonl(PartialPath(checkpoint));
  if (resume.done.size() < completed || completed > corpus.size()) {
    throw Error(ErrorCode::kSchemaError,
                "checkpoint " + checkpoint.string() +
                    " does not match its partial output");
  }
  resume.done.resize(completed);
  for (std::size_t i = 0; i < completed; ++i) {
    if (resume.done[i].id != corpus[i].id) {
      throw Error(ErrorCode::kIdMismatch,
                  "checkpoint was written for a different corpus (id " +
                      resume.done[i].id + " vs " + corpus[i].id + ")");
    }
  }
  return resume;
}

void SaveCheckpoint(const fs::path& checkpoint,
                    std::span<const ParallelExample> chunk,
                    std::size_t completed, bool truncate_partial) {
  {
    std::ofstream partial(PartialPath(checkpoint),
                          std::ios::binary |
                              (truncate_partial ? std::ios::trunc : std::ios::app));
    WriteJsonl(chunk, partial);
    partial.flush();
    if (!partial) throw Error(ErrorCode::kIo, "cannot write checkpoint output");
  }
  nlohmann::ordered_json state;
  state["completed"] = completed;
  state["last_completed_id"] = chunk.empty() ? "" : chunk.back().id;
  const fs::path tmp = checkpoint.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << state.dump() << '\n';
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  fs::rename(tmp, checkpoint);
}

Tokens SplitWhitespace(const std::string& text) {
  Tokens out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double Ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

CorrectionResult IdentityCorrector::Correct(const std::string& /*id*/,
                                            const std::string& text) const {
  return {true, text, 1, ""};
}

HttpCorrector::HttpCorrector(HttpEndpoint endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(retry) {}

CorrectionResult HttpCorrector::Correct(const std::string& id,
                                        const std::string& text) const {
  nlohmann::ordered_json body;
  body["id"] = id;
  body["text"] = text;
  const HttpJsonResult http = PostJsonWithRetry(endpoint_, body, retry_);
  CorrectionResult result;
  result.attempts = http.attempts;
  if (!http.ok) {
    result.error = http.error;
    return result;
  }
  if (!http.body.is_object() || !http.body.contains("text") ||
      !http.body["text"].is_string()) {
    result.error = "malformed response: missing string field 'text'";
    return result;
  }
  result.ok = true;
  result.text = http.body["text"].get<std::string>();
  return result;
}

std::vector<ParallelExample> Relabel(std::span<const ParallelExample> corpus,
                                     const Corrector& corrector,
                                     const RelabelOptions& options) {
  std::vector<ParallelExample> out;
  if (options.checkpoint) out = LoadCheckpoint(*options.checkpoint, corpus).done;
  const std::size_t chunk = std::max<std::size_t>(1, options.checkpoint_every);

  while (out.size() < corpus.size()) {
    const std::size_t begin = out.size();
    const std::size_t end = std::min(corpus.size(), begin + chunk);
    std::vector<ParallelExample> block(end - begin);
    std::vector<std::string> failures(end - begin);
    std::vector<std::exception_ptr> errors(end - begin);

#pragma omp parallel for num_threads(std::max(1, options.workers)) schedule(dynamic, 8)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(end - begin); ++k) {
      try {
        const ParallelExample& in = corpus[begin + k];
        const CorrectionResult fixed =
            corrector.Correct(in.id, JoinTokens(in.source));
        Tokens target;
        if (fixed.ok && IsValidUtf8(fixed.text)) target = SplitWhitespace(fixed.text);
        if (target.empty()) {
          failures[k] = fixed.ok ? "corrector returned empty or invalid text"
                                 : fixed.error;
          continue;
        }
        ParallelExample& pair = block[k];
        pair.id = in.id;
        pair.source = in.source;
        pair.target = std::move(target);
        pair.meta[kRelabelMetaKey] = pair.target == in.target   ? "target"
                                     : pair.target == in.source ? "source"
                                                                : "changed";
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }

    for (std::size_t k = 0; k < block.size(); ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      if (!failures[k].empty()) {
        const std::string last = out.empty() ? "" : out.back().id;
        throw RelabelError("corrector failed on id " + corpus[begin + k].id +
                               ": " + failures[k] +
                               " (last completed id: " +
                               (last.empty() ? "<none>" : last) + ")",
                           out.size(), last);
      }
    }
    if (options.checkpoint) {
      SaveCheckpoint(*options.checkpoint, block, end, /*truncate=*/begin == 0);
    }
    out.insert(out.end(), std::make_move_iterator(block.begin()),
               std::make_move_iterator(block.end()));
  }
  return out;
}

std::vector<ParallelExample> Relabel(std::span<const SyntheticSample> corpus,
                                     const Corrector& corrector,
                                     const RelabelOptions& options) {
  std::vector<ParallelExample> pairs;
  pairs.reserve(corpus.size());
  for (const auto& s : corpus) pairs.push_back(s.AsPair());
  return Relabel(std::span<const ParallelExample>(pairs), corrector, options);
}

double RelabelDiffReport::changed_fraction() const {
  return Ratio(targets_changed, pairs);
}
double RelabelDiffReport::token_change_rate() const {
  return Ratio(changed_tokens, target_tokens);
}
double RelabelDiffReport::errorful_fraction_before() const {
  return Ratio(errorful_before, pairs);
}
double RelabelDiffReport::errorful_fraction_after() const {
  return Ratio(errorful_after, pairs);
}

nlohmann::ordered_json RelabelDiffReport::ToJson() const {
  nlohmann::ordered_json j;
  j["pairs"] = pairs;
  j["targets_changed"] = targets_changed;
  j["changed_fraction"] = changed_fraction();
  j["changed_tokens"] = changed_tokens;
  j["target_tokens"] = target_tokens;
  j["token_change_rate"] = token_change_rate();
  j["errorful_fraction_before"] = errorful_fraction_before();
  j["errorful_fraction_after"] = errorful_fraction_after();
  return j;
}

RelabelDiffReport RelabelDiffStats(std::span<const ParallelExample> before,
                                   std::span<const ParallelExample> after) {
  if (before.size() != after.size()) {
    throw Error(ErrorCode::kIdMismatch,
                "corpora differ in length: " + std::to_string(before.size()) +
                    " vs " + std::to_string(after.size()));
  }
  RelabelDiffReport report;
  report.pairs = before.size();
  for (std::size_t i = 0; i < before.size(); ++i) {
    const auto& b = before[i];
    const auto& a = after[i];
    if (b.id != a.id) {
      throw Error(ErrorCode::kIdMismatch, "id mismatch at position " +
                                              std::to_string(i) + ": " + b.id +
                                              " vs " + a.id);
    }
    report.target_tokens += b.target.size();
    if (b.source != b.target) ++report.errorful_before;
    if (a.source != a.target) ++report.errorful_after;
    if (b.target == a.target) continue;
    ++report.targets_changed;
    for (const Edit& e : ExtractEdits(b.target, a.target)) {
      report.changed_tokens += std::max<std::size_t>(e.src.size(),
                                                     e.replacement.size());
    }
  }
  return report;
}

}  // namespace gecaug
