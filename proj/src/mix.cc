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

#include "gecaug/mix.h"

#include <algorithm>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#include "gecaug/error.h"
#include "gecaug/hash.h"

namespace gecaug {
namespace {

namespace fs = std::filesystem;

fs::path Resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::vector<ParallelExample>> ReadAll(
    const std::vector<fs::path>& paths) {
  std::vector<std::vector<ParallelExample>> out(paths.size());
  std::vector<std::exception_ptr> errors(paths.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(paths.size()); ++i) {
    try {
      out[i] = ReadParallelCorpus(paths[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<MixOrigin> RealOrigins(const StagePlan& plan,
                                   std::vector<std::vector<ParallelExample>> data) {
  std::vector<MixOrigin> origins;
  std::set<std::string> used = {kSyntheticOrigin};
  for (std::size_t i = 0; i < plan.real_corpora.size(); ++i) {
    std::string name = plan.real_corpora[i].stem().string();
    if (name.empty()) name = "real";
    std::string unique = name;
    for (int k = 2; used.count(unique); ++k) unique = name + "-" + std::to_string(k);
    used.insert(unique);
    origins.push_back({unique, std::move(data[i])});
  }
  return origins;
}

MixResult MixWithCap(const StagePlan& plan, std::vector<MixOrigin> origins,
                     const std::vector<ParallelExample>* synthetic,
                     std::size_t cap) {
  if (synthetic) {
    if (cap > synthetic->size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "synthetic_count " + std::to_string(cap) +
                      " exceeds synthetic corpus size " +
                      std::to_string(synthetic->size()));
    }
    origins.push_back(
        {kSyntheticOrigin,
         std::vector<ParallelExample>(synthetic->begin(),
                                      synthetic->begin() + cap)});
  }
  return MixCorpora(origins, plan.seed, plan.stage);
}

}  // namespace

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kI:
      return "I";
    case Stage::kII:
      return "II";
    case Stage::kIII:
      return "III";
  }
  return "?";
}

Stage ParseStage(std::string_view name) {
  if (name == "I") return Stage::kI;
  if (name == "II") return Stage::kII;
  if (name == "III") return Stage::kIII;
  throw Error(ErrorCode::kConfig,
              "stage must be one of I, II, III, got '" + std::string(name) + "'");
}

void StagePlan::Validate() const {
  if (stage == Stage::kI && synthetic_corpus) {
    throw Error(ErrorCode::kConfig, "stage I plans cannot use a synthetic corpus");
  }
  if (synthetic_count && *synthetic_count > 0 && !synthetic_corpus) {
    throw Error(ErrorCode::kConfig,
                "synthetic_count given without synthetic_corpus");
  }
  if (real_corpora.empty() && !synthetic_corpus) {
    throw Error(ErrorCode::kConfig, "plan lists no corpora");
  }
}

nlohmann::ordered_json StagePlan::ToJson() const {
  nlohmann::ordered_json j;
  j["stage"] = StageName(stage);
  j["real_corpora"] = nlohmann::ordered_json::array();
  for (const auto& p : real_corpora) j["real_corpora"].push_back(p.string());
  if (synthetic_corpus) j["synthetic_corpus"] = synthetic_corpus->string();
  if (synthetic_count) j["synthetic_count"] = *synthetic_count;
  j["seed"] = seed;
  return j;
}

StagePlan ParseStagePlan(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "plan must be a JSON object");
  static const std::set<std::string> kKeys = {
      "stage", "real_corpora", "synthetic_corpus", "synthetic_count", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) {
      throw Error(ErrorCode::kConfig, "unknown plan key '" + key + "'");
    }
  }
  StagePlan plan;
  try {
    if (!j.contains("stage") || !j["stage"].is_string()) {
      throw Error(ErrorCode::kConfig, "plan needs a string 'stage'");
    }
    plan.stage = ParseStage(j["stage"].get<std::string>());
    if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
      throw Error(ErrorCode::kConfig, "plan needs a non-negative integer 'seed'");
    }
    plan.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("real_corpora")) {
      for (const auto& p : j.at("real_corpora")) {
        plan.real_corpora.push_back(Resolve(base_dir, p.get<std::string>()));
      }
    }
    if (j.contains("synthetic_corpus") && !j["synthetic_corpus"].is_null()) {
      plan.synthetic_corpus =
          Resolve(base_dir, j["synthetic_corpus"].get<std::string>());
    }
    if (j.contains("synthetic_count") && !j["synthetic_count"].is_null()) {
      if (!j["synthetic_count"].is_number_unsigned()) {
        throw Error(ErrorCode::kConfig,
                    "synthetic_count must be a non-negative integer");
      }
      plan.synthetic_count = j["synthetic_count"].get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("invalid plan: ") + e.what());
  }
  plan.Validate();
  return plan;
}

StagePlan ReadStagePlan(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig,
                "cannot parse plan " + path.string() + ": " + e.what());
  }
  return ParseStagePlan(j, path.parent_path());
}

double MixManifest::errorful_fraction() const {
  return total == 0 ? 0.0
                    : static_cast<double>(errorful) / static_cast<double>(total);
}

nlohmann::ordered_json MixManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["stage"] = StageName(stage);
  j["seed"] = seed;
  j["origins"] = nlohmann::ordered_json::object();
  for (const auto& [name, count] : origin_counts) j["origins"][name] = count;
  j["total"] = total;
  j["errorful"] = errorful;
  j["errorful_fraction"] = errorful_fraction();
  j["content_sha256"] = content_sha256;
  return j;
}

MixResult MixCorpora(std::span<const MixOrigin> origins, std::uint64_t seed,
                     Stage stage) {
  MixResult result;
  result.manifest.stage = stage;
  result.manifest.seed = seed;
  std::set<std::string> names;
  std::size_t total = 0;
  for (const auto& o : origins) {
    if (!names.insert(o.name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate origin name '" + o.name + "'");
    }
    total += o.pairs.size();
  }
  result.pairs.reserve(total);
  for (const auto& o : origins) {
    result.manifest.origin_counts.emplace_back(o.name, o.pairs.size());
    for (const auto& p : o.pairs) {
      ParallelExample copy = p;
      copy.id = o.name + ":" + p.id;
      if (copy.source != copy.target) ++result.manifest.errorful;
      result.pairs.push_back(std::move(copy));
    }
  }
  Rng rng(seed);
  Shuffle(result.pairs, rng);
  result.manifest.total = result.pairs.size();
  std::ostringstream body;
  WriteJsonl(result.pairs, body);
  result.manifest.content_sha256 = Sha256Hex(body.str());
  return result;
}

MixResult Mix(const StagePlan& plan) {
  plan.Validate();
  std::vector<fs::path> paths = plan.real_corpora;
  if (plan.synthetic_corpus) paths.push_back(*plan.synthetic_corpus);
  auto data = ReadAll(paths);
  std::vector<ParallelExample> synthetic;
  if (plan.synthetic_corpus) {
    synthetic = std::move(data.back());
    data.pop_back();
  }
  const std::size_t cap = plan.synthetic_count.value_or(synthetic.size());
  return MixWithCap(plan, RealOrigins(plan, std::move(data)),
                    plan.synthetic_corpus ? &synthetic : nullptr, cap);
}

std::vector<SweepEntry> RatioSweep(const StagePlan& plan,
                                   std::span<const std::size_t> caps,
                                   const fs::path& out_dir) {
  plan.Validate();
  std::set<std::size_t> seen;
  for (std::size_t cap : caps) {
    if (!seen.insert(cap).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate cap " + std::to_string(cap));
    }
  }
  if (!plan.synthetic_corpus && (seen.size() > 1 || !seen.count(0))) {
    throw Error(ErrorCode::kConfig, "ratio sweep needs a synthetic corpus");
  }
  std::vector<fs::path> paths = plan.real_corpora;
  if (plan.synthetic_corpus) paths.push_back(*plan.synthetic_corpus);
  auto data = ReadAll(paths);
  std::vector<ParallelExample> synthetic;
  if (plan.synthetic_corpus) {
    synthetic = std::move(data.back());
    data.pop_back();
  }
  for (std::size_t cap : caps) {
    if (cap > synthetic.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cap " + std::to_string(cap) +
                      " exceeds synthetic corpus size " +
                      std::to_string(synthetic.size()));
    }
  }
  const std::vector<MixOrigin> real = RealOrigins(plan, std::move(data));

  fs::create_directories(out_dir);
  std::vector<SweepEntry> entries;
  for (std::size_t cap : caps) {
    MixResult mixed = MixWithCap(plan, real,
                                 plan.synthetic_corpus ? &synthetic : nullptr, cap);
    SweepEntry entry;
    entry.cap = cap;
    entry.output = out_dir / ("mix-" + std::to_string(cap) + ".jsonl");
    WriteJsonl(mixed.pairs, entry.output);
    std::ofstream manifest(entry.output.string() + ".manifest.json",
                           std::ios::binary | std::ios::trunc);
    nlohmann::ordered_json mj = mixed.manifest.ToJson();
    mj["cap"] = cap;
    manifest << mj.dump(2) << '\n';
    if (!manifest) throw Error(ErrorCode::kIo, "cannot write sweep manifest");
    entry.manifest = std::move(mixed.manifest);
    entries.push_back(std::move(entry));
  }

  std::ofstream summary(out_dir / "sweep.tsv", std::ios::binary | std::ios::trunc);
  summary << "cap\ttotal\tsynthetic\terrorful_fraction\tcontent_sha256\tfile\n";
  for (const auto& e : entries) {
    std::uint64_t syn = 0;
    for (const auto& [name, count] : e.manifest.origin_counts) {
      if (name == kSyntheticOrigin) syn = count;
    }
    std::ostringstream frac;
    frac.precision(6);
    frac << std::fixed << e.manifest.errorful_fraction();
    summary << e.cap << '\t' << e.manifest.total << '\t' << syn << '\t'
            << frac.str() << '\t' << e.manifest.content_sha256 << '\t'
            << e.output.filename().string() << '\n';
  }
  if (!summary) throw Error(ErrorCode::kIo, "cannot write sweep summary");
  return entries;
}

}  // namespace gecaug
