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

#include "gecaug/cli.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gecaug/corpus.h"
#include "gecaug/denoise.h"
#include "gecaug/error.h"
#include "gecaug/eval.h"
#include "gecaug/genbackend.h"
#include "gecaug/hash.h"
#include "gecaug/http_json.h"
#include "gecaug/mix.h"
#include "gecaug/pattern.h"
#include "gecaug/rng.h"
#include "gecaug/synth.h"

namespace gecaug::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Reads a JSON object as CLI11 config: top-level scalars and arrays set
// global options, nested objects set the options of the subcommand with
// that name.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* /*app*/, bool /*default_also*/,
                        bool /*write_description*/,
                        std::string /*prefix*/) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") +
                                 e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    Walk(j, {}, items);
    return items;
  }

 private:
  static std::string Scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void Walk(const nlohmann::json& j, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      std::string name = key;
      std::replace(name.begin(), name.end(), '_', '-');
      if (value.is_object()) {
        if (!parents.empty()) {
          throw CLI::ConversionError("config nesting is one level deep");
        }
        Walk(value, {name}, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = name;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Globals {
  std::optional<std::uint64_t> seed;
  int n = 1;
  double error_rate = 0.5;
  int workers = 1;
  bool quiet = false;
};

class Logger {
 public:
  Logger(std::ostream& err, bool quiet, std::string command)
      : err_(err),
        quiet_(quiet),
        command_(std::move(command)),
        start_(std::chrono::steady_clock::now()) {}

  void Event(std::string_view stage, const ojson& fields = ojson::object()) {
    if (quiet_) return;
    ojson e;
    e["event"] = "stage";
    e["command"] = command_;
    e["stage"] = stage;
    e["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
    for (const auto& [k, v] : fields.items()) e[k] = v;
    err_ << e.dump() << '\n';
  }

 private:
  std::ostream& err_;
  bool quiet_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
};

std::string Base(const fs::path& p) { return p.filename().string(); }

void EnsureParent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

class RunManifest {
 public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}

  ojson config = ojson::object();
  ojson counts = ojson::object();
  ojson extra = ojson::object();
  std::optional<std::uint64_t> seed;

  void AddInput(const fs::path& p) { inputs_.push_back(p); }
  void AddOutput(const fs::path& p) { outputs_.push_back(p); }

  void Write(const fs::path& primary) const {
    ojson m;
    m["tool"] = "gecaug";
    m["version"] = kVersion;
    m["command"] = command_;
    m["config"] = config;
    m["config_sha256"] = Sha256Hex(config.dump());
    m["seed"] = seed ? ojson(*seed) : ojson(nullptr);
    m["inputs"] = Files(inputs_);
    m["outputs"] = Files(outputs_);
    m["counts"] = counts;
    for (const auto& [k, v] : extra.items()) m[k] = v;
    const fs::path path = ManifestPath(primary);
    EnsureParent(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << m.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }

 private:
  static ojson Files(const std::vector<fs::path>& paths) {
    ojson arr = ojson::array();
    for (const auto& p : paths) {
      arr.push_back({{"path", Base(p)}, {"sha256", Sha256File(p)}});
    }
    return arr;
  }

  std::string command_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

std::uint64_t RequireSeed(const Globals& g, std::string_view command) {
  if (!g.seed) {
    throw Error(ErrorCode::kConfig,
                "--seed is required for '" + std::string(command) + "'");
  }
  return *g.seed;
}

void WriteText(const fs::path& path, const std::string& text) {
  EnsureParent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

// --- subcommands -----------------------------------------------------------

struct ExtractArgs {
  fs::path in;
  fs::path out;
  std::string corpus_id;
};

void RunExtract(const ExtractArgs& a, const Globals& g, Logger& log) {
  log.Event("read", {{"input", Base(a.in)}});
  const auto corpus = ReadParallelCorpus(a.in);
  const std::string corpus_id =
      a.corpus_id.empty() ? a.in.stem().string() : a.corpus_id;
  log.Event("extract", {{"pairs", corpus.size()}, {"n", g.n}});
  const PatternPool pool = BuildPool(corpus, g.n, corpus_id, g.workers);
  EnsureParent(a.out);
  WritePool(pool, a.out);
  log.Event("write", {{"patterns", pool.size()}, {"total", pool.total()}});

  RunManifest m("extract");
  m.config = {{"in", Base(a.in)}, {"out", Base(a.out)}, {"n", g.n},
              {"corpus_id", corpus_id}};
  m.AddInput(a.in);
  m.AddOutput(a.out);
  m.counts = {{"pairs", corpus.size()},
              {"patterns", pool.size()},
              {"total", pool.total()}};
  m.extra["provenance"] = pool.provenance();
  m.Write(a.out);
}

struct PoolArgs {
  std::vector<fs::path> in;
  fs::path out;
};

void RunPool(const PoolArgs& a, const Globals& g, Logger& log) {
  std::vector<PatternPool> pools;
  for (const auto& p : a.in) pools.push_back(ReadPool(p, g.n));
  log.Event("merge", {{"pools", pools.size()}});
  const PatternPool merged = MergePools(pools);
  EnsureParent(a.out);
  WritePool(merged, a.out);
  log.Event("write", {{"patterns", merged.size()}, {"total", merged.total()}});

  RunManifest m("pool");
  ojson ins = ojson::array();
  for (const auto& p : a.in) {
    ins.push_back(Base(p));
    m.AddInput(p);
  }
  m.config = {{"in", ins}, {"out", Base(a.out)}, {"n", merged.n()}};
  m.AddOutput(a.out);
  m.counts = {{"pools", pools.size()},
              {"patterns", merged.size()},
              {"total", merged.total()}};
  m.extra["provenance"] = merged.provenance();
  m.Write(a.out);
}

struct SampleArgs {
  fs::path pool;
  std::size_t count = 0;
  fs::path out;
  bool fewshot = false;
};

void RunSample(const SampleArgs& a, const Globals& g, Logger& log) {
  const std::uint64_t seed = RequireSeed(g, "sample");
  const PatternPool pool = ReadPool(a.pool, g.n);
  if (pool.empty()) throw Error(ErrorCode::kEmptyPool, "pool is empty");
  const PatternSampler sampler(pool, /*sendable_only=*/true);
  log.Event("sample", {{"count", a.count}, {"support", sampler.support()}});

  std::ostringstream body;
  std::uint64_t drawn = 0;
  for (std::size_t i = 0; i < a.count; ++i) {
    Rng rng = Rng::ForStream(seed, i);
    const std::vector<ErrorPattern> patterns = sampler.Sample(rng);
    std::vector<Tokens> correct;
    for (const auto& p : patterns) correct.push_back(p.correct);
    const GenerationRequest req =
        AssembleInput(correct, rng, "req-" + std::to_string(i + 1));
    ojson line;
    line["id"] = req.id;
    line["patterns"] = ojson::array();
    for (const auto& p : patterns) {
      line["patterns"].push_back(
          {{"wrong", JoinTokens(p.wrong)}, {"correct", JoinTokens(p.correct)}});
    }
    line["template"] = req.template_text;
    if (a.fewshot) line["prompt"] = BuildFewShotPrompt(req);
    body << line.dump() << '\n';
    drawn += patterns.size();
  }
  WriteText(a.out, body.str());
  log.Event("write", {{"requests", a.count}});

  RunManifest m("sample");
  m.config = {{"pool", Base(a.pool)}, {"count", a.count}, {"out", Base(a.out)},
              {"n", pool.n()},        {"fewshot", a.fewshot}};
  m.seed = seed;
  m.AddInput(a.pool);
  m.AddOutput(a.out);
  m.counts = {{"requests", a.count}, {"patterns", drawn}};
  m.Write(a.out);
}

struct FinetuneArgs {
  fs::path in;
  fs::path out;
};

void RunFinetune(const FinetuneArgs& a, const Globals& g, Logger& log) {
  const std::uint64_t seed = RequireSeed(g, "finetune");
  const auto corpus = ReadParallelCorpus(a.in);
  log.Event("mask", {{"sentences", corpus.size()}});
  std::ostringstream body;
  std::uint64_t written = 0, skipped = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Tokens& sentence = corpus[i].target;
    if (sentence.size() < 4) {
      ++skipped;
      continue;
    }
    Rng rng = Rng::ForStream(seed, i);
    const FinetuneExample ex = BuildFinetuneExample(sentence, rng);
    ojson line;
    line["id"] = corpus[i].id;
    line["input"] = ex.input;
    line["target_span"] = {ex.target_span.start, ex.target_span.end};
    line["masked"] = ojson::array();
    for (const Span& s : ex.masked) line["masked"].push_back({s.start, s.end});
    body << line.dump() << '\n';
    ++written;
  }
  WriteText(a.out, body.str());
  log.Event("write", {{"examples", written}, {"skipped", skipped}});

  RunManifest m("finetune");
  m.config = {{"in", Base(a.in)}, {"out", Base(a.out)}};
  m.seed = seed;
  m.AddInput(a.in);
  m.AddOutput(a.out);
  m.counts = {{"examples", written}, {"skipped_short", skipped}};
  m.Write(a.out);
}

struct SynthesizeArgs {
  fs::path pool;
  std::size_t count = 0;
  fs::path out;
  std::string backend = "stub";
  double stub_drop_rate = 0.0;
  std::optional<std::size_t> max_attempts;
  bool send_prompt = false;
  int max_tokens = 128;
  int timeout_ms = 30000;
};

std::unique_ptr<Generator> MakeGenerator(const SynthesizeArgs& a,
                                         std::uint64_t seed) {
  if (a.backend == "stub") {
    return std::make_unique<StubGenerator>(seed, a.stub_drop_rate);
  }
  HttpEndpoint endpoint =
      EndpointFromEnv("GECAUG_GENERATOR_URL", "GECAUG_GENERATOR_TOKEN");
  endpoint.timeout = std::chrono::milliseconds(a.timeout_ms);
  return std::make_unique<HttpGenerator>(endpoint, RetryPolicy{}, a.send_prompt,
                                         a.max_tokens);
}

void RunSynthesize(const SynthesizeArgs& a, const Globals& g, Logger& log) {
  const std::uint64_t seed = RequireSeed(g, "synthesize");
  const PatternPool pool = ReadPool(a.pool, g.n);
  const auto backend = MakeGenerator(a, seed);

  SynthesisConfig config;
  config.seed = seed;
  config.count = a.count;
  config.error_rate = g.error_rate;
  config.max_attempts = a.max_attempts;
  config.workers = g.workers;
  log.Event("generate", {{"count", a.count},
                         {"backend", backend->id()},
                         {"error_rate", g.error_rate}});
  const SynthesisResult result = Synthesize(pool, *backend, config);

  EnsureParent(a.out);
  WriteSyntheticJsonl(result.samples, a.out);
  const fs::path stats_path = a.out.string() + ".stats.json";
  ojson stats = result.stats.ToJson();
  stats["error_rate"] = g.error_rate;
  WriteText(stats_path, stats.dump(2) + "\n");
  log.Event("write", {{"samples", result.samples.size()},
                      {"attempts", result.stats.attempts}});

  RunManifest m("synthesize");
  m.config = {{"pool", Base(a.pool)},
              {"count", a.count},
              {"out", Base(a.out)},
              {"n", pool.n()},
              {"error_rate", g.error_rate},
              {"backend", a.backend},
              {"stub_drop_rate", a.stub_drop_rate},
              {"max_attempts", a.max_attempts ? ojson(*a.max_attempts)
                                              : ojson(nullptr)}};
  if (a.backend == "http") {
    m.config["send_prompt"] = a.send_prompt;
    m.config["max_tokens"] = a.max_tokens;
  }
  m.seed = seed;
  m.AddInput(a.pool);
  m.AddOutput(a.out);
  m.AddOutput(stats_path);
  m.counts = {{"samples", result.samples.size()},
              {"attempts", result.stats.attempts},
              {"errorful", result.stats.errorful_samples}};
  m.Write(a.out);
}

struct DenoiseArgs {
  fs::path in;
  fs::path out;
  std::string backend = "identity";
  std::optional<fs::path> checkpoint;
  std::size_t checkpoint_every = 1000;
  int timeout_ms = 30000;
};

void RunDenoise(const DenoiseArgs& a, const Globals& g, Logger& log) {
  const auto before = ReadParallelCorpus(a.in);
  std::unique_ptr<Corrector> corrector;
  if (a.backend == "identity") {
    corrector = std::make_unique<IdentityCorrector>();
  } else {
    HttpEndpoint endpoint =
        EndpointFromEnv("GECAUG_CORRECTOR_URL", "GECAUG_CORRECTOR_TOKEN");
    endpoint.timeout = std::chrono::milliseconds(a.timeout_ms);
    corrector = std::make_unique<HttpCorrector>(endpoint);
  }
  RelabelOptions options;
  options.workers = g.workers;
  options.checkpoint = a.checkpoint;
  options.checkpoint_every = a.checkpoint_every;
  if (a.checkpoint) EnsureParent(*a.checkpoint);
  log.Event("relabel", {{"pairs", before.size()}, {"backend", corrector->id()}});
  const auto after = Relabel(before, *corrector, options);

  EnsureParent(a.out);
  WriteJsonl(after, a.out);
  const RelabelDiffReport diff = RelabelDiffStats(before, after);
  const fs::path diff_path = a.out.string() + ".diff.json";
  WriteText(diff_path, diff.ToJson().dump(2) + "\n");
  log.Event("write", {{"pairs", after.size()},
                      {"changed_fraction", diff.changed_fraction()}});

  RunManifest m("denoise");
  m.config = {{"in", Base(a.in)},
              {"out", Base(a.out)},
              {"backend", a.backend},
              {"checkpoint", a.checkpoint ? ojson(Base(*a.checkpoint))
                                          : ojson(nullptr)},
              {"checkpoint_every", a.checkpoint_every}};
  m.AddInput(a.in);
  m.AddOutput(a.out);
  m.AddOutput(diff_path);
  m.counts = {{"pairs", after.size()},
              {"targets_changed", diff.targets_changed},
              {"errorful_after", diff.errorful_after}};
  m.Write(a.out);
}

struct MixArgs {
  fs::path plan;
  fs::path out;
  std::vector<std::size_t> sweep;
};

void RunMix(const MixArgs& a, const Globals& g, Logger& log) {
  StagePlan plan = ReadStagePlan(a.plan);
  if (g.seed) plan.seed = *g.seed;

  RunManifest m("mix");
  ojson plan_json = plan.ToJson();
  plan_json["real_corpora"] = ojson::array();
  for (const auto& p : plan.real_corpora) plan_json["real_corpora"].push_back(Base(p));
  if (plan.synthetic_corpus) plan_json["synthetic_corpus"] = Base(*plan.synthetic_corpus);
  m.config = {{"plan", plan_json}, {"out", Base(a.out)}};
  m.seed = plan.seed;
  m.AddInput(a.plan);
  for (const auto& p : plan.real_corpora) m.AddInput(p);
  if (plan.synthetic_corpus) m.AddInput(*plan.synthetic_corpus);

  if (!a.sweep.empty()) {
    m.config["sweep"] = a.sweep;
    log.Event("sweep", {{"caps", a.sweep}});
    const auto entries = RatioSweep(plan, a.sweep, a.out);
    ojson caps = ojson::array();
    for (const auto& e : entries) {
      m.AddOutput(e.output);
      m.AddOutput(e.output.string() + ".manifest.json");
      ojson c = e.manifest.ToJson();
      c["cap"] = e.cap;
      caps.push_back(std::move(c));
    }
    const fs::path summary = a.out / "sweep.tsv";
    m.AddOutput(summary);
    m.counts = {{"runs", entries.size()}};
    m.extra["sweep"] = caps;
    log.Event("write", {{"runs", entries.size()}});
    m.Write(summary);
    return;
  }

  log.Event("mix", {{"stage", StageName(plan.stage)}});
  const MixResult mixed = Mix(plan);
  EnsureParent(a.out);
  WriteJsonl(mixed.pairs, a.out);
  log.Event("write", {{"pairs", mixed.pairs.size()}});
  m.AddOutput(a.out);
  m.counts = {{"pairs", mixed.pairs.size()}};
  m.extra["mix"] = mixed.manifest.ToJson();
  m.Write(a.out);
}

struct StatsArgs {
  std::optional<fs::path> pool;
  std::optional<fs::path> corpus;
  std::optional<fs::path> ref_pool;
  std::size_t top_k = 100;
  std::optional<fs::path> out;
};

void RunStats(const StatsArgs& a, const Globals& g, std::ostream& stdout_,
              Logger& log) {
  if (!a.pool && !a.corpus && !a.ref_pool) {
    throw Error(ErrorCode::kConfig,
                "stats needs at least one of --pool, --corpus, --ref-pool");
  }
  if (a.ref_pool && !a.corpus) {
    throw Error(ErrorCode::kConfig, "--ref-pool needs --corpus");
  }
  RunManifest m("stats");
  ojson report;
  if (a.pool) {
    const PatternPool pool = ReadPool(*a.pool, g.n);
    report["pool"] = {{"n", pool.n()},
                      {"patterns", pool.size()},
                      {"total", pool.total()},
                      {"sendable_patterns",
                       std::count_if(pool.counts().begin(), pool.counts().end(),
                                     [](const auto& kv) { return kv.first.sendable(); })}};
    m.AddInput(*a.pool);
  }
  std::optional<DistributionReport> dist;
  if (a.corpus) {
    const auto corpus = ReadParallelCorpus(*a.corpus);
    log.Event("error_rate", {{"pairs", corpus.size()}});
    const double rate = ErrorRate(corpus, g.workers);
    report["corpus"] = {{"pairs", corpus.size()},
                        {"errorful_fraction", rate},
                        {"errorful_percent", 100.0 * rate}};
    m.AddInput(*a.corpus);
    if (a.ref_pool) {
      const PatternPool ref = ReadPool(*a.ref_pool, g.n);
      m.AddInput(*a.ref_pool);
      log.Event("distribution", {{"top_k", a.top_k}});
      dist = DistributionConsistency(ref, corpus, a.top_k, g.workers);
      report["distribution"] = dist->ToJson();
    }
  }
  m.config = {{"pool", a.pool ? ojson(Base(*a.pool)) : ojson(nullptr)},
              {"corpus", a.corpus ? ojson(Base(*a.corpus)) : ojson(nullptr)},
              {"ref_pool", a.ref_pool ? ojson(Base(*a.ref_pool)) : ojson(nullptr)},
              {"top_k", a.top_k},
              {"n", g.n}};

  if (!a.out) {
    stdout_ << report.dump(2) << '\n';
    return;
  }
  WriteText(*a.out, report.dump(2) + "\n");
  m.AddOutput(*a.out);
  if (dist) {
    fs::path csv = *a.out;
    csv.replace_extension(".csv");
    WriteText(csv, dist->ToCsv());
    m.AddOutput(csv);
  }
  m.config["out"] = Base(*a.out);
  m.Write(*a.out);
}

struct ScoreArgs {
  fs::path hyp;
  fs::path gold;
  double beta = kDefaultBeta;
  std::optional<fs::path> out;
};

void RunScore(const ScoreArgs& a, const Globals& g, std::ostream& stdout_,
              Logger& log) {
  const auto hyp = ReadParallelCorpus(a.hyp);
  const auto gold = ReadM2(a.gold);
  log.Event("score", {{"sentences", gold.size()}, {"beta", a.beta}});
  const ScoreReport report = Score(hyp, gold, a.beta, g.workers);
  const std::string text = FormatScoreReport(report);
  stdout_ << text;
  if (!a.out) return;
  WriteText(*a.out, report.ToJson().dump(2) + "\n");
  RunManifest m("score");
  m.config = {{"hyp", Base(a.hyp)},
              {"gold", Base(a.gold)},
              {"beta", a.beta},
              {"out", Base(*a.out)}};
  m.AddInput(a.hyp);
  m.AddInput(a.gold);
  m.AddOutput(*a.out);
  m.counts = {{"sentences", report.sentences},
              {"tp", report.counts.tp},
              {"fp", report.counts.fp},
              {"fn", report.counts.fn}};
  m.Write(*a.out);
}

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

int DefaultWorkers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

fs::path ManifestPath(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

bool ManifestValid(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) return false;
  ojson m;
  try {
    m = ojson::parse(in);
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  for (const char* key : {"tool", "version", "command", "config",
                          "config_sha256", "seed", "inputs", "outputs", "counts"}) {
    if (!m.contains(key)) return false;
  }
  if (m["config_sha256"] != Sha256Hex(m["config"].dump())) return false;
  const fs::path dir = manifest.parent_path();
  for (const auto& out : m["outputs"]) {
    const fs::path p = dir / out["path"].get<std::string>();
    if (!fs::exists(p) || Sha256File(p) != out["sha256"]) return false;
  }
  return true;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Data augmentation toolkit for grammatical error "
               "correction corpora.",
               "gecaug"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (flags take precedence)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals g;
  g.workers = DefaultWorkers();
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Random seed");
  app.add_option("--n", g.n, "Pattern width")
      ->check(CLI::IsMember({1, 3, 5}));
  app.add_option("--error-rate", g.error_rate,
                 "Fraction of synthetic sentences that receive errors")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--workers", g.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress log events");

  ExtractArgs extract;
  auto* extract_cmd = app.add_subcommand("extract", "Build a pattern pool from a parallel corpus");
  extract_cmd->add_option("--in", extract.in, "Parallel corpus (.tsv, .jsonl, .m2)")->required();
  extract_cmd->add_option("--out", extract.out, "Pool JSONL")->required();
  extract_cmd->add_option("--corpus-id", extract.corpus_id, "Provenance tag");

  PoolArgs pool;
  auto* pool_cmd = app.add_subcommand("pool", "Merge pattern pools");
  pool_cmd->add_option("--in", pool.in, "Pool JSONL files")->required();
  pool_cmd->add_option("--out", pool.out, "Merged pool JSONL")->required();

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Sample patterns and render generation inputs");
  sample_cmd->add_option("--pool", sample.pool, "Pool JSONL")->required();
  sample_cmd->add_option("--count", sample.count, "Number of requests")->required();
  sample_cmd->add_option("--out", sample.out, "Requests JSONL")->required();
  sample_cmd->add_flag("--fewshot", sample.fewshot, "Include the few-shot prompt");

  FinetuneArgs finetune;
  auto* finetune_cmd = app.add_subcommand("finetune", "Build masked training examples for a context generator");
  finetune_cmd->add_option("--in", finetune.in, "Corpus whose targets are used")->required();
  finetune_cmd->add_option("--out", finetune.out, "Examples JSONL")->required();

  SynthesizeArgs synth;
  auto* synth_cmd = app.add_subcommand("synthesize", "Generate a synthetic parallel corpus");
  synth_cmd->add_option("--pool", synth.pool, "Pool JSONL")->required();
  synth_cmd->add_option("--count", synth.count, "Number of samples")->required()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth.out, "Synthetic JSONL")->required();
  synth_cmd->add_option("--backend", synth.backend, "Generator backend")
      ->check(CLI::IsMember({"stub", "http"}));
  synth_cmd->add_option("--stub-drop-rate", synth.stub_drop_rate,
                        "Probability that the stub drops a pattern")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--max-attempts", synth.max_attempts,
                        "Total generation attempts (default 3 x count)");
  synth_cmd->add_flag("--send-prompt", synth.send_prompt,
                      "Send the few-shot prompt to the http backend");
  synth_cmd->add_option("--max-tokens", synth.max_tokens, "Generation length cap");
  synth_cmd->add_option("--timeout-ms", synth.timeout_ms, "Per-request timeout")
      ->check(CLI::PositiveNumber);

  DenoiseArgs denoise;
  auto* denoise_cmd = app.add_subcommand("denoise", "Relabel targets with a corrector");
  denoise_cmd->add_option("--in", denoise.in, "Corpus to relabel")->required();
  denoise_cmd->add_option("--out", denoise.out, "Relabeled JSONL")->required();
  denoise_cmd->add_option("--backend", denoise.backend, "Corrector backend")
      ->check(CLI::IsMember({"identity", "http"}));
  denoise_cmd->add_option("--checkpoint", denoise.checkpoint, "Checkpoint file");
  denoise_cmd->add_option("--checkpoint-every", denoise.checkpoint_every,
                          "Pairs between checkpoints")
      ->check(CLI::PositiveNumber);
  denoise_cmd->add_option("--timeout-ms", denoise.timeout_ms, "Per-request timeout")
      ->check(CLI::PositiveNumber);

  MixArgs mix;
  auto* mix_cmd = app.add_subcommand("mix", "Mix real and synthetic corpora");
  mix_cmd->add_option("--plan", mix.plan, "Stage plan JSON")->required();
  mix_cmd->add_option("--out", mix.out,
                      "Output JSONL, or a directory with --sweep")->required();
  mix_cmd->add_option("--sweep", mix.sweep, "Synthetic caps for a ratio sweep");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Pool, error-rate and distribution statistics");
  stats_cmd->add_option("--pool", stats.pool, "Pool JSONL");
  stats_cmd->add_option("--corpus", stats.corpus, "Parallel corpus");
  stats_cmd->add_option("--ref-pool", stats.ref_pool, "Reference pool");
  stats_cmd->add_option("--top-k", stats.top_k, "Patterns compared")
      ->check(CLI::PositiveNumber);
  stats_cmd->add_option("--out", stats.out, "Report JSON (stdout when absent)");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score a hypothesis against M2 gold");
  score_cmd->add_option("--hyp", score.hyp, "Hypothesis corpus")->required();
  score_cmd->add_option("--gold", score.gold, "Gold M2")->required();
  score_cmd->add_option("--beta", score.beta, "F beta")
      ->check(CLI::PositiveNumber);
  score_cmd->add_option("--out", score.out, "Report JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string message = OneLine(e.what());
    if (!args.empty() && !args[0].starts_with('-') &&
        app.get_subcommand_no_throw(args[0]) == nullptr) {
      message = "unknown subcommand '" + args[0] + "'";
    }
    err << "ERROR " << CodeName(ErrorCode::kConfig) << ' ' << message << '\n';
    return kExitConfig;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  CLI::App* cmd = app.get_subcommands().front();
  Logger log(err, g.quiet, cmd->get_name());
  try {
    if (cmd == sample_cmd || cmd == finetune_cmd || cmd == synth_cmd) {
      RequireSeed(g, cmd->get_name());
    }
    log.Event("start", {{"workers", g.workers}});
    if (cmd == extract_cmd) {
      RunExtract(extract, g, log);
    } else if (cmd == pool_cmd) {
      RunPool(pool, g, log);
    } else if (cmd == sample_cmd) {
      RunSample(sample, g, log);
    } else if (cmd == finetune_cmd) {
      RunFinetune(finetune, g, log);
    } else if (cmd == synth_cmd) {
      RunSynthesize(synth, g, log);
    } else if (cmd == denoise_cmd) {
      RunDenoise(denoise, g, log);
    } else if (cmd == mix_cmd) {
      RunMix(mix, g, log);
    } else if (cmd == stats_cmd) {
      RunStats(stats, g, out, log);
    } else if (cmd == score_cmd) {
      RunScore(score, g, out, log);
    }
    log.Event("done");
  } catch (const Error& e) {
    err << "ERROR " << CodeName(e.code()) << ' ' << OneLine(e.what()) << '\n';
    return e.code() == ErrorCode::kConfig ? kExitConfig : kExitError;
  } catch (const std::exception& e) {
    err << "ERROR INTERNAL " << OneLine(e.what()) << '\n';
    return kExitError;
  }
  return kExitOk;
}

int Run(const std::vector<std::string>& args) {
  return Run(args, std::cout, std::cerr);
}

}  // namespace gecaug::cli
