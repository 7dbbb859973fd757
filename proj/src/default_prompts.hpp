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

#include <string_view>

// Contents of prompts/*, embedded at configure time.
namespace artctx::embedded {

extern const std::string_view kExtraction;
extern const std::string_view kExtractionExamples;
extern const std::string_view kExtractionInput;
extern const std::string_view kConcepts;
extern const std::string_view kRanking;
extern const std::string_view kGeneration;

}  // namespace artctx::embedded
