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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace artctx {

// Replaces every "{name}" with its value. Unknown placeholders are left as is.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values);

// Number of occurrences of "{name}" in tmpl.
std::size_t count_placeholder(std::string_view tmpl, std::string_view name);

// Text prompts for graph construction and retrieval. Each can be overridden
// by a file of the same name in a prompt directory.
struct PromptSet {
  // extraction.txt: system message; needs {entity_types} and {examples}.
  std::string extraction;
  // extraction_examples.txt: few-shot block substituted for {examples}.
  std::string extraction_examples;
  // extraction_input.txt: user message; needs {entity_types}, {input_text}.
  std::string extraction_input;
  // concepts.txt: system message; needs {n}.
  std::string concepts;
  // ranking.txt: system message; needs {k}.
  std::string ranking;

  static PromptSet defaults();
  // Files missing from dir keep their defaults. Throws kTemplate when a
  // loaded file lacks a required placeholder.
  static PromptSet load(const std::filesystem::path& dir);
  void validate() const;
};

}  // namespace artctx
