// Copyright 2026 The artctx Authors.
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

#include "artctx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "artctx/error.hpp"
#include "artctx/text.hpp"

namespace artctx {

bool EvalPair::valid() const {
  if (text::trim(candidate).empty()) return false;
  return std::any_of(references.begin(), references.end(),
                     [](const std::string& r) { return !text::trim(r).empty(); });
}

namespace {

bool is_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

bool is_punct(char32_t c) {
  if (c < 0x80) return std::ispunct(static_cast<int>(c)) != 0;
  return (c >= 0xA1 && c <= 0xBF && c != 0xAA && c != 0xB5 && c != 0xBA) ||
         (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x300C && c <= 0x3011);
}

char32_t lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string_view>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

Tokens tokenize(std::string_view input, bool lowercase) {
  Tokens out;
  const std::u32string cps = text::decode_utf8(input);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && is_punct(cps[b])) ++b;
    while (e > b && is_punct(cps[e - 1])) --e;
    if (b < e) {
      std::u32string token = cps.substr(b, e - b);
      if (lowercase) std::transform(token.begin(), token.end(), token.begin(), lower);
      out.push_back(text::encode_utf8(token));
    }
    i = j;
  }
  return out;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (int n = 0; n < kMaxBleuOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  return *this;
}

BleuStats bleu_stats(const Tokens& candidate, const std::vector<Tokens>& references) {
  BleuStats s;
  s.candidate_length = candidate.size();
  // Closest reference length; ties go to the shorter reference.
  std::size_t best = 0;
  bool have = false;
  for (const Tokens& ref : references) {
    const auto diff = [&](std::size_t len) {
      return len > candidate.size() ? len - candidate.size() : candidate.size() - len;
    };
    if (!have || diff(ref.size()) < diff(best) ||
        (diff(ref.size()) == diff(best) && ref.size() < best)) {
      best = ref.size();
      have = true;
    }
  }
  s.reference_length = best;

  for (int n = 1; n <= kMaxBleuOrder; ++n) {
    const NgramCounts cand = ngrams(candidate, static_cast<std::size_t>(n));
    NgramCounts max_ref;
    for (const Tokens& ref : references) {
      for (const auto& [gram, count] : ngrams(ref, static_cast<std::size_t>(n))) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    for (const auto& [gram, count] : cand) {
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) s.matches[n - 1] += std::min(count, it->second);
      s.totals[n - 1] += count;
    }
  }
  return s;
}

double bleu_from_stats(const BleuStats& s, int n) {
  if (n < 1 || n > kMaxBleuOrder) throw Error(ErrorCode::kValidation, "BLEU order must be 1..4");
  if (s.candidate_length == 0) return 0.0;
  double log_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (s.matches[i] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(s.matches[i]) / static_cast<double>(s.totals[i]));
  }
  const double c = static_cast<double>(s.candidate_length);
  const double r = static_cast<double>(s.reference_length);
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * bp * std::exp(log_sum / n);
}

namespace {

std::vector<Tokens> tokenize_all(const std::vector<std::string>& texts, bool lowercase) {
  std::vector<Tokens> out;
  for (const auto& t : texts) {
    if (!text::trim(t).empty()) out.push_back(tokenize(t, lowercase));
  }
  return out;
}

}  // namespace

std::vector<double> corpus_bleu(const std::vector<EvalPair>& pairs, int max_n,
                                const MetricOptions& options) {
  if (max_n < 1 || max_n > kMaxBleuOrder) {
    throw Error(ErrorCode::kValidation, "BLEU order must be 1..4");
  }
  BleuStats total;
  std::size_t used = 0;
  for (const EvalPair& p : pairs) {
    if (!p.valid()) continue;
    total += bleu_stats(tokenize(p.candidate, options.lowercase),
                        tokenize_all(p.references, options.lowercase));
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::kValidation, "no valid evaluation pairs");
  std::vector<double> out;
  for (int n = 1; n <= max_n; ++n) out.push_back(bleu_from_stats(total, n));
  return out;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(const Tokens& candidate, const std::vector<Tokens>& references, double beta) {
  double best = 0.0;
  for (const Tokens& ref : references) {
    if (candidate.empty() || ref.empty()) continue;
    const double lcs = static_cast<double>(lcs_length(candidate, ref));
    if (lcs == 0.0) continue;
    const double p = lcs / static_cast<double>(candidate.size());
    const double r = lcs / static_cast<double>(ref.size());
    const double b2 = beta * beta;
    best = std::max(best, (1.0 + b2) * p * r / (r + b2 * p));
  }
  return best;
}

MetricReport evaluate_corpus(const std::vector<EvalPair>& pairs, const MetricOptions& options) {
  MetricReport report;
  BleuStats total;
  double rouge_sum = 0.0;
  for (const EvalPair& p : pairs) {
    if (!p.valid()) {
      ++report.skipped;
      continue;
    }
    const Tokens cand = tokenize(p.candidate, options.lowercase);
    const std::vector<Tokens> refs = tokenize_all(p.references, options.lowercase);
    const BleuStats s = bleu_stats(cand, refs);
    total += s;
    PairScore score{p.id, {}, rouge_l(cand, refs, options.beta)};
    for (int n = 1; n <= kMaxBleuOrder; ++n) score.bleu[n - 1] = bleu_from_stats(s, n);
    rouge_sum += score.rouge_l;
    report.pairs.push_back(std::move(score));
  }
  if (report.pairs.empty()) throw Error(ErrorCode::kValidation, "no valid evaluation pairs");
  for (int n = 1; n <= kMaxBleuOrder; ++n) report.bleu[n - 1] = bleu_from_stats(total, n);
  report.rouge_l = rouge_sum / static_cast<double>(report.pairs.size());
  return report;
}

nlohmann::ordered_json to_json(const MetricReport& report) {
  using nlohmann::ordered_json;
  auto scores = [](const std::array<double, kMaxBleuOrder>& bleu, double rouge) {
    ordered_json j;
    for (int n = 1; n <= kMaxBleuOrder; ++n) j["bleu_" + std::to_string(n)] = bleu[n - 1];
    j["rouge_l"] = rouge;
    return j;
  };
  ordered_json out;
  out["pair_count"] = report.pairs.size();
  out["skipped"] = report.skipped;
  out["corpus"] = scores(report.bleu, report.rouge_l);
  out["pairs"] = ordered_json::array();
  for (const auto& p : report.pairs) {
    ordered_json row{{"id", p.id}};
    row.update(scores(p.bleu, p.rouge_l));
    out["pairs"].push_back(std::move(row));
  }
  return out;
}

std::string format_metric_table(const MetricReport& report) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%-8s %8s %8s %8s %8s %8s\n", "Pairs", "BLEU-1", "BLEU-2",
                "BLEU-3", "BLEU-4", "ROUGE-L");
  out += line;
  std::snprintf(line, sizeof line, "%-8zu %8.2f %8.2f %8.2f %8.2f %8.2f\n", report.pairs.size(),
                report.bleu[0], report.bleu[1], report.bleu[2], report.bleu[3],
                report.rouge_l * 100.0);
  out += line;
  return out;
}

namespace {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::vector<nlohmann::json> rows;
  const std::string body = text::read_file(path);
  std::size_t line_no = 0;
  for (std::string_view line : text::split_lines(body)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      rows.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!rows.back().is_object() || !rows.back().contains("id") || !rows.back()["id"].is_string()) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_no) + ": record needs a string id");
    }
  }
  return rows;
}

}  // namespace

std::vector<EvalPair> load_eval_pairs(const std::filesystem::path& candidates,
                                      const std::filesystem::path& references) {
  std::map<std::string, std::vector<std::string>> refs;
  for (const auto& row : read_jsonl(references)) {
    auto& slot = refs[row["id"].get<std::string>()];
    if (row.contains("references") && row["references"].is_array()) {
      for (const auto& r : row["references"]) slot.push_back(r.get<std::string>());
    } else if (row.contains("reference") && row["reference"].is_string()) {
      slot.push_back(row["reference"].get<std::string>());
    } else {
      throw Error(ErrorCode::kParse, "reference record '" + row["id"].get<std::string>() +
                                         "' has no references");
    }
  }
  std::vector<EvalPair> pairs;
  for (const auto& row : read_jsonl(candidates)) {
    EvalPair p;
    p.id = row["id"].get<std::string>();
    if (!row.contains("candidate") || !row["candidate"].is_string()) {
      throw Error(ErrorCode::kParse, "candidate record '" + p.id + "' has no candidate text");
    }
    p.candidate = row["candidate"].get<std::string>();
    auto it = refs.find(p.id);
    if (it == refs.end()) throw Error(ErrorCode::kValidation, "no references for '" + p.id + "'");
    p.references = it->second;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace artctx
