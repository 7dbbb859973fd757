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

#include "artctx/prompts.hpp"

#include "artctx/error.hpp"
#include "artctx/text.hpp"
#include "default_prompts.hpp"

namespace artctx {

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::size_t count_placeholder(std::string_view tmpl, std::string_view name) {
  const std::string needle = "{" + std::string(name) + "}";
  std::size_t count = 0;
  for (std::size_t pos = tmpl.find(needle); pos != std::string_view::npos;
       pos = tmpl.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

PromptSet PromptSet::defaults() {
  return PromptSet{
      std::string(embedded::kExtraction),      std::string(embedded::kExtractionExamples),
      std::string(embedded::kExtractionInput), std::string(embedded::kConcepts),
      std::string(embedded::kRanking),
  };
}

namespace {

void require_placeholder(std::string_view tmpl, std::string_view file, std::string_view name) {
  if (count_placeholder(tmpl, name) == 0) {
    throw Error(ErrorCode::kTemplate,
                std::string(file) + " is missing placeholder {" + std::string(name) + "}");
  }
}

}  // namespace

void PromptSet::validate() const {
  require_placeholder(extraction, "extraction.txt", "entity_types");
  require_placeholder(extraction, "extraction.txt", "examples");
  require_placeholder(extraction_input, "extraction_input.txt", "entity_types");
  require_placeholder(extraction_input, "extraction_input.txt", "input_text");
  require_placeholder(concepts, "concepts.txt", "n");
  require_placeholder(ranking, "ranking.txt", "k");
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
  PromptSet set = defaults();
  auto maybe = [&](const char* file, std::string& slot) {
    const auto path = dir / file;
    if (std::filesystem::exists(path)) slot = text::read_file(path);
  };
  maybe("extraction.txt", set.extraction);
  maybe("extraction_examples.txt", set.extraction_examples);
  maybe("extraction_input.txt", set.extraction_input);
  maybe("concepts.txt", set.concepts);
  maybe("ranking.txt", set.ranking);
  set.validate();
  return set;
}

}  // namespace artctx
