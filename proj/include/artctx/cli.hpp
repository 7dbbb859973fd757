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

#include <iosfwd>
#include <span>
#include <string>

namespace artctx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

// Entry point for the artctx command. Subcommands: ingest, build-graph,
// stats, index, retrieve, explain, eval, serve.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace artctx
