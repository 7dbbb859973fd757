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

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace artctx {

struct EvalPair {
  std::string id;
  std::string candidate;
  std::vector<std::string> references;

  // Candidate non-empty and at least one non-empty reference.
  bool valid() const;
};

struct MetricOptions {
  bool lowercase = true;
  double beta = 1.0;  // ROUGE-L recall weight
};

using Tokens = std::vector<std::string>;

// Split on Unicode whitespace, punctuation stripped from both token ends,
// lowercased (ASCII and Latin-1) unless disabled.
Tokens tokenize(std::string_view text, bool lowercase = true);

inline constexpr int kMaxBleuOrder = 4;

// Clipped n-gram matches and candidate n-gram totals per order, plus the
// candidate length and the closest reference length.
struct BleuStats {
  std::array<std::size_t, kMaxBleuOrder> matches{};
  std::array<std::size_t, kMaxBleuOrder> totals{};
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;

  BleuStats& operator+=(const BleuStats& other);
};

BleuStats bleu_stats(const Tokens& candidate, const std::vector<Tokens>& references);

// BLEU-n on a 0-100 scale with uniform weights over orders 1..n, no
// smoothing.
double bleu_from_stats(const BleuStats& stats, int n);

// BLEU-1..max_n over the valid pairs, from summed statistics. Throws
// kValidation when max_n is outside [1, 4] or no pair is valid.
std::vector<double> corpus_bleu(const std::vector<EvalPair>& pairs, int max_n = kMaxBleuOrder,
                                const MetricOptions& options = {});

std::size_t lcs_length(const Tokens& a, const Tokens& b);

// LCS F-measure, best over references. 0 when either side is empty.
double rouge_l(const Tokens& candidate, const std::vector<Tokens>& references, double beta = 1.0);

struct PairScore {
  std::string id;
  std::array<double, kMaxBleuOrder> bleu{};
  double rouge_l = 0.0;
};

struct MetricReport {
  std::vector<PairScore> pairs;
  std::array<double, kMaxBleuOrder> bleu{};  // corpus level
  double rouge_l = 0.0;                      // mean over pairs
  std::size_t skipped = 0;                   // invalid pairs left out
};

MetricReport evaluate_corpus(const std::vector<EvalPair>& pairs, const MetricOptions& options = {});

nlohmann::ordered_json to_json(const MetricReport& report);
std::string format_metric_table(const MetricReport& report);

// Candidates: JSON lines {"id", "candidate"}. References: JSON lines
// {"id", "references": [...]} or {"id", "reference": "..."}. Joined by id
// in candidate order; a candidate without references is kValidation.
std::vector<EvalPair> load_eval_pairs(const std::filesystem::path& candidates,
                                      const std::filesystem::path& references);

}  // namespace artctx
