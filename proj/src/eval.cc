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

#include "gecaug/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "gecaug/align.h"
#include "gecaug/error.h"

namespace gecaug {
namespace {

using EditKey = std::pair<Span, Tokens>;

double Ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

namespace internal {

SentenceScore ScoreSentence(const ParallelExample& hyp,
                            const AnnotatedExample& gold, double beta) {
  std::set<EditKey> hyp_edits;
  for (const Edit& e : ExtractEdits(hyp.source, hyp.target)) {
    hyp_edits.emplace(e.src, e.replacement);
  }

  static const std::vector<GoldEdit> kNoEdits;
  std::vector<std::pair<int, const std::vector<GoldEdit>*>> annotators;
  for (const auto& [id, edits] : gold.edits) annotators.emplace_back(id, &edits);
  if (annotators.empty()) annotators.emplace_back(0, &kNoEdits);

  SentenceScore best;
  bool have_best = false;
  double best_f = 0.0;
  for (const auto& [id, edits] : annotators) {
    SentenceScore s;
    std::set<EditKey> matched;
    for (const GoldEdit& g : *edits) {
      EditKey key(g.span, g.correction);
      EditCounts c;
      if (hyp_edits.count(key) && matched.insert(key).second) {
        c.tp = 1;
      } else {
        c.fn = 1;
      }
      s.counts += c;
      s.categories.emplace_back(g.type, c);
    }
    for (const EditKey& h : hyp_edits) {
      if (matched.count(h)) continue;
      ++s.counts.fp;
      s.categories.emplace_back(kUntypedCategory, EditCounts{0, 1, 0});
    }
    const double f = FBeta(s.counts, beta);
    const auto rank = [](double fv, const EditCounts& c) {
      return std::make_tuple(fv, c.tp, -static_cast<std::int64_t>(c.fp + c.fn));
    };
    if (!have_best || rank(f, s.counts) > rank(best_f, best.counts)) {
      best = std::move(s);
      best_f = f;
      have_best = true;
    }
  }
  return best;
}

void CheckAligned(std::span<const ParallelExample> hypothesis,
                  std::span<const AnnotatedExample> gold) {
  if (hypothesis.size() != gold.size()) {
    throw Error(ErrorCode::kSourceMismatch,
                "hypothesis has " + std::to_string(hypothesis.size()) +
                    " sentences, gold has " + std::to_string(gold.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (hypothesis[i].source != gold[i].source) {
      throw Error(ErrorCode::kSourceMismatch,
                  "source mismatch at sentence " + gold[i].id +
                      " (hypothesis id " + hypothesis[i].id + ")");
    }
  }
}

ScoreReport Finish(std::span<const SentenceScore> sentences, double beta) {
  ScoreReport report;
  report.beta = beta;
  report.sentences = sentences.size();
  for (const SentenceScore& s : sentences) {
    report.counts += s.counts;
    for (const auto& [name, c] : s.categories) {
      report.per_category[name].counts += c;
    }
  }
  report.precision = Precision(report.counts);
  report.recall = Recall(report.counts);
  report.f_beta = FBeta(report.counts, beta);
  for (auto& [name, cat] : report.per_category) {
    cat.f_beta = FBeta(cat.counts, beta);
  }
  return report;
}

}  // namespace internal

EditCounts& EditCounts::operator+=(const EditCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

double Precision(const EditCounts& c) { return Ratio(c.tp, c.tp + c.fp); }
double Recall(const EditCounts& c) { return Ratio(c.tp, c.tp + c.fn); }

double FBetaFromPR(double precision, double recall, double beta) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be positive");
  }
  const double b2 = beta * beta;
  const double den = b2 * precision + recall;
  return den == 0.0 ? 0.0 : (1.0 + b2) * precision * recall / den;
}

double FBeta(std::int64_t tp, std::int64_t fp, std::int64_t fn, double beta) {
  if (tp < 0 || fp < 0 || fn < 0) {
    throw Error(ErrorCode::kInvalidArgument, "edit counts must be non-negative");
  }
  return FBeta(EditCounts{static_cast<std::uint64_t>(tp),
                          static_cast<std::uint64_t>(fp),
                          static_cast<std::uint64_t>(fn)},
               beta);
}

double FBeta(const EditCounts& c, double beta) {
  return FBetaFromPR(Precision(c), Recall(c), beta);
}

nlohmann::ordered_json ScoreReport::ToJson() const {
  nlohmann::ordered_json j;
  j["sentences"] = sentences;
  j["beta"] = beta;
  j["tp"] = counts.tp;
  j["fp"] = counts.fp;
  j["fn"] = counts.fn;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f_beta"] = f_beta;
  j["per_category"] = nlohmann::ordered_json::object();
  for (const auto& [name, cat] : per_category) {
    j["per_category"][name] = {{"tp", cat.counts.tp},
                               {"fp", cat.counts.fp},
                               {"fn", cat.counts.fn},
                               {"f_beta", cat.f_beta}};
  }
  return j;
}

ScoreReport Score(std::span<const ParallelExample> hypothesis,
                  std::span<const AnnotatedExample> gold, double beta,
                  int workers) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be positive");
  }
  internal::CheckAligned(hypothesis, gold);

  std::vector<internal::SentenceScore> per_sentence(gold.size());
  std::vector<std::exception_ptr> errors(gold.size());
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(gold.size()); ++i) {
    try {
      per_sentence[i] = internal::ScoreSentence(hypothesis[i], gold[i], beta);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  return internal::Finish(per_sentence, beta);
}

std::string FormatScoreReport(const ScoreReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "Sentences   : %llu\nTP          : %llu\nFP          : %llu\n"
                "FN          : %llu\nPrecision   : %.4f\nRecall      : %.4f\n"
                "F_%-9g : %.4f\n",
                static_cast<unsigned long long>(report.sentences),
                static_cast<unsigned long long>(report.counts.tp),
                static_cast<unsigned long long>(report.counts.fp),
                static_cast<unsigned long long>(report.counts.fn),
                report.precision, report.recall, report.beta, report.f_beta);
  out << buf;
  if (!report.per_category.empty()) {
    out << "\nCategory\tTP\tFP\tFN\tF\n";
    for (const auto& [name, cat] : report.per_category) {
      std::snprintf(buf, sizeof(buf), "\t%llu\t%llu\t%llu\t%.4f\n",
                    static_cast<unsigned long long>(cat.counts.tp),
                    static_cast<unsigned long long>(cat.counts.fp),
                    static_cast<unsigned long long>(cat.counts.fn), cat.f_beta);
      out << name << buf;
    }
  }
  return out.str();
}

double ErrorRate(std::span<const ParallelExample> corpus, int workers) {
  std::uint64_t errorful = 0;
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(static) \
    reduction(+ : errorful)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(corpus.size()); ++i) {
    if (!ExtractEdits(corpus[i].source, corpus[i].target).empty()) ++errorful;
  }
  return Ratio(errorful, corpus.size());
}

nlohmann::ordered_json DistributionReport::ToJson() const {
  nlohmann::ordered_json j;
  j["top_k"] = top_k;
  j["support"] = patterns.size();
  j["cosine"] = cosine;
  j["spearman"] = spearman;
  j["patterns"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    j["patterns"].push_back({{"wrong", patterns[i].wrong},
                             {"correct", patterns[i].correct},
                             {"reference", reference_freqs[i]},
                             {"candidate", candidate_freqs[i]}});
  }
  return j;
}

std::string DistributionReport::ToCsv() const {
  const auto quote = [](const Tokens& t) {
    std::string s = JoinTokens(t);
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "rank,wrong,correct,reference,candidate\n";
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    out << (i + 1) << ',' << quote(patterns[i].wrong) << ','
        << quote(patterns[i].correct) << ',' << reference_freqs[i] << ','
        << candidate_freqs[i] << '\n';
  }
  return out.str();
}

double Cosine(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "vectors differ in length");
  }
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

std::vector<double> AverageRanks(std::span<const std::uint64_t> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return values[x] < values[y];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double Spearman(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "vectors differ in length");
  }
  if (a.empty()) return 0.0;
  const std::vector<double> ra = AverageRanks(a);
  const std::vector<double> rb = AverageRanks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return ra == rb ? 1.0 : 0.0;
  return cov / std::sqrt(va * vb);
}

DistributionReport DistributionConsistency(const PatternPool& reference,
                                           const PatternPool& candidate,
                                           std::size_t top_k) {
  if (top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  if (reference.empty()) {
    throw Error(ErrorCode::kEmptyPool, "reference pool is empty");
  }
  DistributionReport report;
  report.top_k = top_k;
  for (const auto& [pattern, count] : reference.TopK(top_k)) {
    report.patterns.push_back(pattern);
    report.reference_freqs.push_back(count);
    report.candidate_freqs.push_back(candidate.count(pattern));
  }
  report.cosine = Cosine(report.reference_freqs, report.candidate_freqs);
  report.spearman = Spearman(report.reference_freqs, report.candidate_freqs);
  return report;
}

DistributionReport DistributionConsistency(
    const PatternPool& reference, std::span<const ParallelExample> corpus,
    std::size_t top_k, int workers) {
  if (top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
  if (reference.empty()) {
    throw Error(ErrorCode::kEmptyPool, "reference pool is empty");
  }
  const PatternPool candidate = BuildPool(corpus, reference.n(), "", workers);
  return DistributionConsistency(reference, candidate, top_k);
}

}  // namespace gecaug
