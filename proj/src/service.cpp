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

#include "artctx/service.hpp"

#include <iostream>

#include "artctx/graph_io.hpp"
#include "httplib.h"

namespace artctx {

namespace {

HttpReply json_reply(int status, const nlohmann::ordered_json& body) {
  return {status, body.dump(2) + "\n"};
}

HttpReply error_reply(const Error& e) {
  int status = 502;
  switch (e.code()) {
    case ErrorCode::kValidation:
    case ErrorCode::kParse:
      status = 400;
      break;
    case ErrorCode::kNotFound:
      status = 404;
      break;
    default:
      break;
  }
  nlohmann::ordered_json body{{"error", std::string(to_string(e.code()))},
                              {"message", e.detail()}};
  if (!e.stage().empty()) body["stage"] = e.stage();
  return json_reply(status, body);
}

template <typename Fn>
HttpReply guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return error_reply(e);
  } catch (const std::exception& e) {
    return json_reply(500, {{"error", "internal"}, {"message", e.what()}});
  }
}

nlohmann::json parse_body(std::string_view body) {
  if (body.empty()) throw Error(ErrorCode::kValidation, "request body is empty");
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("body is not valid JSON: ") + e.what());
  }
}

struct ParsedRequest {
  PaintingQuery painting;
  RetrieverConfig retriever;
};

ParsedRequest parse_request(std::string_view body, const RetrieverConfig& base) {
  const nlohmann::json doc = parse_body(body);
  ParsedRequest out{painting_from_json(doc), base};
  if (doc.contains("overrides")) out.retriever = apply_overrides(base, doc["overrides"]);
  return out;
}

void write(httplib::Response& res, const HttpReply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, "application/json");
}

}  // namespace

HttpReply Service::healthz() const {
  return json_reply(200, {{"status", "ok"},
                          {"nodes", pipeline_.graph.node_count()},
                          {"edges", pipeline_.graph.edge_count()},
                          {"indexed", pipeline_.index.count()}});
}

HttpReply Service::node(const std::string& id) const {
  return guarded([&] {
    if (!pipeline_.graph.contains(id)) {
      throw Error(ErrorCode::kNotFound, "no node with id '" + id + "'");
    }
    nlohmann::ordered_json out = to_json(pipeline_.graph.node(id));
    out.erase("kind");
    nlohmann::ordered_json neighbors = nlohmann::ordered_json::array();
    for (const NodeId& n : pipeline_.graph.neighbors(id)) {
      const KgEdge* edge = pipeline_.graph.find_edge(id, n);
      neighbors.push_back({{"id", n},
                           {"name", pipeline_.graph.node(n).name},
                           {"edge", {{"source", edge->source},
                                     {"target", edge->target},
                                     {"description", edge->description}}}});
    }
    out["neighbors"] = std::move(neighbors);
    return json_reply(200, out);
  });
}

HttpReply Service::retrieve(std::string_view body) const {
  return guarded([&] {
    const ParsedRequest req = parse_request(body, pipeline_.generate.retriever);
    return HttpReply{200, render_subgraph_json(pipeline_.retrieve(req.painting, req.retriever))};
  });
}

HttpReply Service::explain(std::string_view body) const {
  return guarded([&] {
    const ParsedRequest req = parse_request(body, pipeline_.generate.retriever);
    return json_reply(200, to_json(pipeline_.explain(req.painting, req.retriever)));
  });
}

void Service::mount(httplib::Server& server) const {
  server.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    write(res, healthz());
  });
  server.Get(R"(/graph/nodes/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
    write(res, node(req.matches[1]));
  });
  server.Post("/retrieve", [this](const httplib::Request& req, httplib::Response& res) {
    write(res, retrieve(req.body));
  });
  server.Post("/explain", [this](const httplib::Request& req, httplib::Response& res) {
    write(res, explain(req.body));
  });
}

void serve(const Pipeline& pipeline, const std::string& host, int port, int threads) {
  httplib::Server server;
  server.new_task_queue = [threads] {
    return new httplib::ThreadPool(static_cast<std::size_t>(std::max(1, threads)));
  };
  Service service(pipeline);
  service.mount(server);
  std::cerr << "artctx: serving " << pipeline.graph.node_count() << " nodes on " << host << ":"
            << port << "\n";
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::kConfiguration,
                "cannot listen on " + host + ":" + std::to_string(port), "serve");
  }
}

}  // namespace artctx
