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

#include "artctx/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "artctx/construct.hpp"
#include "artctx/graph_io.hpp"
#include "artctx/metrics.hpp"
#include "artctx/pipeline.hpp"
#include "artctx/service.hpp"
#include "artctx/text.hpp"

namespace artctx {

namespace {

struct PaintingArgs {
  std::map<std::string, std::string> named;  // title, artist, ...
  std::vector<std::string> extra;            // key=value
  std::string image;
  std::string question;
};

void add_painting_options(CLI::App* sub, PaintingArgs& p) {
  for (std::string_view key : kAttributeOrder) {
    const std::string k(key);
    sub->add_option_function<std::string>(
        "--" + k, [&p, k](const std::string& v) { p.named[k] = v; }, "Painting " + k);
  }
  sub->add_option("--attr", p.extra, "Extra attribute as key=value");
  sub->add_option("--image", p.image, "Painting image file");
  sub->add_option("--question", p.question, "Question to answer");
}

PaintingQuery to_query(const PaintingArgs& p) {
  PaintingQuery q;
  for (std::string_view key : kAttributeOrder) {
    auto it = p.named.find(std::string(key));
    if (it != p.named.end()) q.set_attribute(it->first, it->second);
  }
  for (const std::string& kv : p.extra) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kValidation, "--attr expects key=value, got '" + kv + "'");
    }
    q.set_attribute(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!p.image.empty()) {
    if (!std::filesystem::exists(p.image)) {
      throw Error(ErrorCode::kValidation, "image not found: " + p.image);
    }
    q.image = ImageRef::from_file(p.image);
  }
  q.question = p.question;
  q.validate();
  return q;
}

void emit(std::ostream& out, const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    out << body;
  } else {
    text::write_file(path, body);
  }
}

ConstructConfig construct_config(const AppConfig& app) {
  ConstructConfig c;
  c.chunking = app.construct.chunking;
  c.dedup_threshold = app.construct.dedup_threshold;
  c.workers = app.construct.workers;
  if (!app.paths.prompts.empty()) c.prompts = PromptSet::load(app.paths.prompts);
  return c;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-grounded artwork explanation", "artctx"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  ConfigValues overrides;
  auto flag_to = [&overrides](CLI::App* sub, const std::string& flag, const std::string& key,
                              const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };
  app.add_option("--config", config_path, "Config file (default: $ARTCTX_CONFIG)");
  app.add_option("--set", sets, "Config override as section.key=value");
  flag_to(&app, "--backend", "gateway.backend", "Gateway backend: mock or remote");
  flag_to(&app, "--fixtures", "gateway.mock_fixtures", "Mock gateway fixture file");
  flag_to(&app, "--prompts", "paths.prompts", "Directory of prompt overrides");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Chunk the documents of a corpus manifest");
  std::string manifest_path, out_path;
  ingest->add_option("--manifest", manifest_path, "Corpus manifest (JSON)")->required();
  ingest->add_option("--out", out_path, "Chunk JSONL output (default stdout)");
  for (CLI::App* sub : {ingest}) {
    flag_to(sub, "--window", "construct.window_tokens", "Chunk window in tokens");
    flag_to(sub, "--overlap", "construct.overlap_tokens", "Overlap between chunks in tokens");
    flag_to(sub, "--stride", "construct.stride_tokens", "Fixed stride in tokens (0: window - overlap)");
  }

  // build-graph
  auto* build = app.add_subcommand("build-graph", "Extract, merge and clean the knowledge graph");
  std::string out_dir;
  build->add_option("--manifest", manifest_path, "Corpus manifest (JSON)")->required();
  build->add_option("--out", out_dir, "Output directory")->required();
  flag_to(build, "--window", "construct.window_tokens", "Chunk window in tokens");
  flag_to(build, "--overlap", "construct.overlap_tokens", "Overlap between chunks in tokens");
  flag_to(build, "--stride", "construct.stride_tokens", "Fixed stride in tokens");
  flag_to(build, "--threshold", "construct.dedup_threshold", "Name similarity merge threshold");
  flag_to(build, "--workers", "construct.workers", "Concurrent extraction calls");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Per-type node and edge statistics");
  bool as_json = false;
  flag_to(stats_cmd, "--graph", "paths.graph", "Graph JSONL");
  stats_cmd->add_flag("--json", as_json, "Print JSON instead of a table");

  // index
  auto* index_cmd = app.add_subcommand("index", "Embed every node into a vector index");
  flag_to(index_cmd, "--graph", "paths.graph", "Graph JSONL");
  flag_to(index_cmd, "--out", "paths.index", "Index file to write");
  flag_to(index_cmd, "--batch", "index.batch_size", "Texts per embedding call");

  // retrieve / explain
  PaintingArgs painting;
  std::string output_format = "json";
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Retrieve the context subgraph for a painting");
  auto* explain_cmd = app.add_subcommand("explain", "Explain a painting with retrieved context");
  for (CLI::App* sub : {retrieve_cmd, explain_cmd}) {
    flag_to(sub, "--graph", "paths.graph", "Graph JSONL");
    flag_to(sub, "--index", "paths.index", "Vector index");
    flag_to(sub, "--k-coarse", "retriever.k_coarse", "Seed nodes from cosine retrieval");
    flag_to(sub, "--k", "retriever.k", "Candidates after expansion");
    flag_to(sub, "--m", "retriever.m", "Nodes kept after pruning");
    flag_to(sub, "--lambda", "retriever.lambda", "Weight of the multimodal score");
    flag_to(sub, "--concepts", "retriever.n_concepts", "Number of concepts to detect");
    add_painting_options(sub, painting);
    sub->add_option("--out", out_path, "Write output to a file");
  }
  flag_to(explain_cmd, "--template", "paths.template", "Generation template JSON");
  explain_cmd->add_option("--output", output_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "BLEU and ROUGE-L against references");
  std::string candidates_path, references_path, report_path;
  MetricOptions metric_options;
  bool case_sensitive = false;
  eval_cmd->add_option("--candidates", candidates_path, "Candidate JSONL")->required();
  eval_cmd->add_option("--references", references_path, "Reference JSONL")->required();
  eval_cmd->add_option("--report", report_path, "Write the JSON report here");
  eval_cmd->add_option("--beta", metric_options.beta, "ROUGE-L recall weight");
  eval_cmd->add_flag("--case-sensitive", case_sensitive, "Keep token case");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the pipeline over HTTP");
  flag_to(serve_cmd, "--graph", "paths.graph", "Graph JSONL");
  flag_to(serve_cmd, "--index", "paths.index", "Vector index");
  flag_to(serve_cmd, "--template", "paths.template", "Generation template JSON");
  flag_to(serve_cmd, "--host", "service.host", "Bind address");
  flag_to(serve_cmd, "--port", "service.port", "Port");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kConfiguration, "--set expects section.key=value, got '" + kv + "'");
      }
      overrides.emplace(kv.substr(0, eq), kv.substr(eq + 1));
    }
    std::optional<std::filesystem::path> file;
    if (!config_path.empty()) {
      file = config_path;
    } else if (auto env = process_env("ARTCTX_CONFIG"); env && !env->empty()) {
      file = *env;
    }
    const AppConfig config = with_stage("config", [&] {
      AppConfig c = load_config(file, overrides);
      c.validate();
      return c;
    });

    if (ingest->parsed()) {
      const auto chunks = with_stage("ingest", [&] {
        return ingest_manifest(CorpusManifest::load(manifest_path), config.construct.chunking);
      });
      std::string body;
      for (const Chunk& c : chunks) {
        nlohmann::ordered_json row{{"document_id", c.document_id}, {"index", c.index},
                                   {"begin", c.span.begin},        {"end", c.span.end},
                                   {"text", c.text}};
        body += row.dump() + "\n";
      }
      emit(out, out_path, body);
      err << "artctx: " << chunks.size() << " chunks\n";
    } else if (build->parsed()) {
      const auto manifest = with_stage("ingest", [&] { return CorpusManifest::load(manifest_path); });
      auto gateway = make_gateway(config.gateway);
      const BuildResult result = build_ackg(*gateway, manifest, construct_config(config));
      persist_build(result, out_dir);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      err << format_cleaning_summary(result.report);
      out << format_stats_table(stats(result.graph));
    } else if (stats_cmd->parsed()) {
      if (config.paths.graph.empty()) throw Error(ErrorCode::kConfiguration, "--graph is required");
      const Ackg graph = with_stage("load", [&] { return load_graph(config.paths.graph); });
      const GraphStats s = stats(graph);
      out << (as_json ? to_json(s).dump(2) + "\n" : format_stats_table(s));
    } else if (index_cmd->parsed()) {
      if (config.paths.graph.empty()) throw Error(ErrorCode::kConfiguration, "--graph is required");
      if (config.paths.index.empty()) throw Error(ErrorCode::kConfiguration, "--out is required");
      const Ackg graph = with_stage("load", [&] { return load_graph(config.paths.graph); });
      auto gateway = make_gateway(config.gateway);
      const VectorIndex index = build_index(*gateway, graph, config.embed_batch);
      save_index(index, config.paths.index);
      err << "artctx: indexed " << index.count() << " nodes (dim " << index.dim() << ")\n";
    } else if (retrieve_cmd->parsed()) {
      const Pipeline pipeline = Pipeline::open(config);
      const PaintingQuery query = to_query(painting);
      emit(out, out_path, render_subgraph_json(pipeline.retrieve(query)));
    } else if (explain_cmd->parsed()) {
      const Pipeline pipeline = Pipeline::open(config);
      const PaintingQuery query = to_query(painting);
      const GenerationResult result = pipeline.explain(query);
      emit(out, out_path,
           output_format == "text" ? result.explanation + "\n" : to_json(result).dump(2) + "\n");
    } else if (eval_cmd->parsed()) {
      metric_options.lowercase = !case_sensitive;
      const MetricReport report = with_stage("eval", [&] {
        return evaluate_corpus(load_eval_pairs(candidates_path, references_path), metric_options);
      });
      if (!report_path.empty()) text::write_file(report_path, to_json(report).dump(2) + "\n");
      out << format_metric_table(report);
      if (report.skipped > 0) err << "artctx: skipped " << report.skipped << " invalid pairs\n";
    } else if (serve_cmd->parsed()) {
      const Pipeline pipeline = Pipeline::open(config);
      serve(pipeline, config.service.host, config.service.port, config.service.threads);
    }
  } catch (const Error& e) {
    err << "artctx: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "artctx: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace artctx
