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

#include <string>
#include <string_view>

#include "artctx/pipeline.hpp"

namespace httplib {
class Server;
}

namespace artctx {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Request handlers over a shared read-only pipeline. Each handler maps
// failures to a status code: 400 for malformed input, 404 for unknown
// nodes, 502 for gateway and pipeline-stage failures.
class Service {
 public:
  explicit Service(const Pipeline& pipeline) : pipeline_(pipeline) {}

  HttpReply healthz() const;
  HttpReply node(const std::string& id) const;
  HttpReply retrieve(std::string_view body) const;
  HttpReply explain(std::string_view body) const;

  void mount(httplib::Server& server) const;

 private:
  const Pipeline& pipeline_;
};

// Blocks serving on host:port until the process is stopped.
void serve(const Pipeline& pipeline, const std::string& host, int port, int threads);

}  // namespace artctx
