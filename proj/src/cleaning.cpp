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

#include "artctx/cleaning.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "artctx/error.hpp"
#include "artctx/text.hpp"

namespace artctx {

double normalized_levenshtein(std::string_view a, std::string_view b) {
  const std::u32string s = text::decode_utf8(a);
  const std::u32string t = text::decode_utf8(b);
  const std::size_t longest = std::max(s.size(), t.size());
  if (longest == 0) return 1.0;

  // Two-row Wagner-Fischer.
  std::vector<std::size_t> prev(t.size() + 1), cur(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return 1.0 - static_cast<double>(prev[t.size()]) / static_cast<double>(longest);
}

namespace {

constexpr std::array<std::string_view, 20> kNumerals = {
    "I",  "II",  "III",  "IV",  "V",  "VI",  "VII",  "VIII",  "IX",  "X",
    "XI", "XII", "XIII", "XIV", "XV", "XVI", "XVII", "XVIII", "XIX", "XX",
};

std::optional<std::string> trailing_numeral(std::string_view name) {
  const auto tokens = text::split_whitespace(name);
  if (tokens.size() < 2) return std::nullopt;
  std::string last(tokens.back());
  std::transform(last.begin(), last.end(), last.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (std::find(kNumerals.begin(), kNumerals.end(), last) == kNumerals.end()) return std::nullopt;
  return last;
}

}  // namespace

bool numeral_guard(std::string_view a, std::string_view b) {
  const auto na = trailing_numeral(a);
  const auto nb = trailing_numeral(b);
  return na && nb && *na != *nb;
}

std::vector<MergeEntry> dedup_nodes(Ackg& graph, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kValidation, "dedup threshold must be in (0, 1]");
  }
  struct Entry {
    std::string name;
    NodeId id;
    NodeType type;
    std::string raw_type;
  };
  std::vector<Entry> order;
  for (const auto& [id, node] : graph.nodes()) {
    order.push_back({std::string(text::trim(node.name)), id, node.type, node.raw_type});
  }
  std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.name, a.id) < std::tie(b.name, b.id);
  });

  std::vector<MergeEntry> merges;
  std::vector<bool> absorbed(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (absorbed[i]) continue;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (absorbed[j]) continue;
      if (order[i].type != order[j].type || order[i].raw_type != order[j].raw_type) continue;
      if (numeral_guard(order[i].name, order[j].name)) continue;
      const double sim = normalized_levenshtein(order[i].name, order[j].name);
      if (sim <= threshold) continue;
      graph.merge_nodes(order[i].id, order[j].id);
      absorbed[j] = true;
      merges.push_back({order[i].id, order[j].id, graph.node(order[i].id).name,
                        order[j].name, sim});
    }
  }
  return merges;
}

std::vector<FilteredNode> filter_by_type(Ackg& graph, std::span<const NodeType> allowed) {
  std::vector<FilteredNode> removed;
  for (const auto& [id, node] : graph.nodes()) {
    if (!node.has_schema_type()) {
      removed.push_back({id, node.name, node.raw_type, "type not in schema"});
    } else if (std::find(allowed.begin(), allowed.end(), node.type) == allowed.end()) {
      removed.push_back({id, node.name, std::string(canonical_name(node.type)),
                         "type not allowed"});
    }
  }
  for (const auto& f : removed) graph.remove_node(f.id);
  return removed;
}

nlohmann::ordered_json to_json(const CleaningReport& report) {
  nlohmann::ordered_json out;
  out["nodes_before"] = report.nodes_before;
  out["nodes_after"] = report.nodes_after;
  out["edges_before"] = report.edges_before;
  out["edges_after"] = report.edges_after;
  out["threshold"] = report.threshold;
  out["merges"] = nlohmann::ordered_json::array();
  for (const auto& m : report.merges) {
    out["merges"].push_back({{"survivor", m.survivor},
                             {"absorbed", m.absorbed},
                             {"survivor_name", m.survivor_name},
                             {"absorbed_name", m.absorbed_name},
                             {"similarity", m.similarity}});
  }
  out["filtered"] = nlohmann::ordered_json::array();
  for (const auto& f : report.filtered) {
    out["filtered"].push_back(
        {{"id", f.id}, {"name", f.name}, {"type", f.type}, {"reason", f.reason}});
  }
  return out;
}

std::string format_cleaning_summary(const CleaningReport& report) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "Before cleaning: %zu nodes, %zu edges\n", report.nodes_before,
                report.edges_before);
  out += buf;
  std::snprintf(buf, sizeof buf, "After cleaning:  %zu nodes, %zu edges\n", report.nodes_after,
                report.edges_after);
  out += buf;
  std::snprintf(buf, sizeof buf, "Merged %zu nodes (similarity > %.2f)\n", report.merges.size(),
                report.threshold);
  out += buf;
  for (const auto& m : report.merges) {
    out += "  " + m.absorbed_name + " -> " + m.survivor_name + "\n";
  }
  std::snprintf(buf, sizeof buf, "Filtered %zu nodes by type\n", report.filtered.size());
  out += buf;
  for (const auto& f : report.filtered) out += "  " + f.name + " (" + f.type + ")\n";
  return out;
}

}  // namespace artctx
