// Copyright 2026 The rcparse Authors.
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

// rcparse: train, run and evaluate the contextual semantic parser.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "rcparse/errors.h"
#include "rcparse/evaluation.h"
#include "rcparse/generator.h"
#include "rcparse/gss_parser.h"
#include "rcparse/http_service.h"
#include "rcparse/pipeline.h"
#include "rcparse/session.h"
#include "rcparse/treebank.h"
#include "rcparse/world.h"

namespace rcparse {
namespace {

void WriteText(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
}

int Generate(std::uint64_t seed, int count, const std::string &profile,
             const std::string &out, bool raw) {
  GeneratorOptions options;
  options.filter_unresolved = !raw;
  auto records = GenerateCorpus(seed, count, profile, options);
  if (out.empty() || out == "-") {
    WriteTreebank(records, std::cout);
  } else {
    SaveTreebank(records, out);
  }
  return 0;
}

int Train(const std::string &treebank, const std::string &out) {
  auto records = LoadTreebank(treebank);
  TrainedModel::Train(records).Save(out);
  std::cout << "trained on " << records.size() << " records -> " << out << "\n";
  return 0;
}

int ParseCommand(const std::string &model_dir, const std::string &scene_path,
                 const std::string &sentence, const std::string &mode_name,
                 const std::string &selection_name, std::uint64_t seed, bool dump_gss) {
  const TrainedModel model = TrainedModel::Load(model_dir);
  const WorldModel world = LoadScene(scene_path);
  auto mode = ParseParseMode(mode_name);
  if (!mode) throw Error(ErrorCode::kUsage, "unknown mode '" + mode_name + "'");
  PipelineOptions options;
  options.mode = *mode;
  options.selection.seed = seed;
  if (selection_name == "random") {
    options.selection.selection = Selection::kRandom;
  } else if (selection_name == "first") {
    options.selection.selection = Selection::kFirst;
  } else if (selection_name != "scored") {
    throw Error(ErrorCode::kUsage, "unknown selection '" + selection_name + "'");
  }
  const std::vector<std::string> tokens = Tokenize(sentence);
  PipelineResult result = RunPipeline(model, tokens, world, options);

  std::cout << "chunks:\n";
  for (const Chunk &c : result.chunks) {
    std::cout << "  " << FeatureNameString(c.feature) << "\t" << c.Text() << "\n";
  }
  if (dump_gss && !result.chunks.empty()) {
    GssParser parser(result.chunks, model.grammar, model.lexicon, model.ellipsis, world,
                     {options.mode, options.ground});
    try {
      parser.Run();
    } catch (const Error &) {
    }
    std::cout << "gss:\n" << parser.Dump();
  }
  std::cout << "forest: " << result.forest.trees.size() << " trees, "
            << result.forest.stats.vertex_count << " vertices, "
            << result.forest.stats.pruned_entities << " pruned entities\n";
  for (const ScoredParse &s : result.scored) {
    std::cout << "  " << (s.verified ? "verified" : "rejected") << "\t" << s.score << "\t"
              << s.tree->canonical();
    if (s.rejection) std::cout << "\t" << ErrorCodeName(*s.rejection);
    std::cout << "\n";
  }
  if (!result.ok()) {
    throw Error(*result.error, result.error_message);
  }
  const ScoredParse &chosen = result.selection->chosen;
  std::cout << "chosen (score " << chosen.score << (result.selection->tie ? ", tie" : "")
            << "):\n"
            << Serialize(*chosen.tree, true) << "\n";
  CommandResponse response = InterpretCommand(model, sentence, world);
  std::cout << "groundings:\n";
  for (const EntityGroundings &g : response.groundings) {
    std::cout << "  " << g.entity << "\n";
    for (const Grounding &x : g.groundings) std::cout << "    " << x.ToString() << "\n";
  }
  return 0;
}

int Evaluate(const std::string &treebank, int folds, std::uint64_t seed,
             const std::string &report, const std::string &timing_csv) {
  auto records = LoadTreebank(treebank);
  EvalOptions options;
  options.folds = folds;
  options.seed = seed;
  EvalReport result = CrossValidate(records, options);
  WriteText(report, result.ToText());
  if (!timing_csv.empty()) WriteText(timing_csv, result.TimingCsv());
  return 0;
}

// Applies a script line by line. Lines starting with '(' are LOSR
// commands; other non-empty lines are parsed with the model.
int Simulate(const std::string &scene_path, const std::string &script_path,
             const std::string &model_dir, const std::string &out) {
  WorldModel world = LoadScene(scene_path);
  std::unique_ptr<TrainedModel> model;
  if (!model_dir.empty()) model = std::make_unique<TrainedModel>(TrainedModel::Load(model_dir));
  std::ifstream script(script_path);
  if (!script) throw Error(ErrorCode::kIo, "cannot open " + script_path);
  int line_number = 0;
  for (std::string line; std::getline(script, line);) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    try {
      if (line[0] == '(') {
        world = ExecuteSequence(*Deserialize(line), world);
        std::cout << line_number << "\tok\t" << line << "\n";
      } else {
        if (!model) throw Error(ErrorCode::kUsage, "natural language lines need --model");
        CommandResponse response = InterpretCommand(*model, line, world);
        world = response.scene;
        std::cout << line_number << "\tok\t" << response.chosen << "\n";
      }
    } catch (const Error &e) {
      throw Error(e.code(), "line " + std::to_string(line_number) + ": " + e.what(),
                  line_number);
    }
  }
  WriteText(out, SceneToJson(world).dump(2) + "\n");
  return 0;
}

int Serve(const std::string &model_dir, const std::string &scene_path, int port,
          const std::string &host, const std::string &static_dir) {
  auto model = std::make_shared<const TrainedModel>(TrainedModel::Load(model_dir));
  SessionManager sessions(model, LoadScene(scene_path));
  httplib::Server server;
  RegisterRoutes(&server, &sessions, static_dir);
  std::cout << "listening on " << host << ":" << port << std::endl;
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{"Contextual semantic parser for robot spatial commands"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int count = 100;
  std::string profile = "standard", out, treebank, model, scene, sentence, mode = "pruned",
              selection = "scored", report, timing_csv, script, host = "127.0.0.1",
              static_dir;
  bool dump_gss = false, raw = false;
  int folds = 10, port = 8080;

  auto *generate = app.add_subcommand("generate", "Generate a synthetic treebank");
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--count", count, "Number of records")->check(CLI::PositiveNumber);
  generate->add_option("--profile", profile, "Template profile")
      ->check(CLI::IsMember(GeneratorProfileNames()));
  generate->add_option("--out", out, "Output treebank (default: stdout)");
  generate->add_flag("--raw", raw, "Keep records the reference pipeline cannot resolve");

  auto *train = app.add_subcommand("train", "Train a model from a treebank");
  train->add_option("--treebank", treebank, "Treebank file")->required();
  train->add_option("--out", out, "Model directory")->required();

  auto *parse = app.add_subcommand("parse", "Parse one sentence against a scene");
  parse->add_option("--model", model, "Model directory")->required();
  parse->add_option("--scene", scene, "Scene JSON file")->required();
  parse->add_option("--sentence", sentence, "Command text")->required();
  parse->add_option("--mode", mode, "pruned or exhaustive");
  parse->add_option("--selection", selection, "scored, random or first");
  parse->add_option("--seed", seed, "Seed for random selection");
  parse->add_flag("--dump-gss", dump_gss, "Print the graph-structured stack");

  auto *evaluate = app.add_subcommand("evaluate", "Cross-validate on a treebank");
  evaluate->add_option("--treebank", treebank, "Treebank file")->required();
  evaluate->add_option("--folds", folds, "Number of folds");
  evaluate->add_option("--seed", seed, "Shuffle seed");
  evaluate->add_option("--report", report, "Report file (default: stdout)");
  evaluate->add_option("--timing-csv", timing_csv, "Per-sentence timing CSV");

  auto *simulate = app.add_subcommand("simulate", "Apply a command script to a scene");
  simulate->add_option("--scene", scene, "Scene JSON file")->required();
  simulate->add_option("--script", script, "One command per line")->required();
  simulate->add_option("--model", model, "Model directory for natural language lines");
  simulate->add_option("--out", out, "Final scene (default: stdout)");

  auto *serve = app.add_subcommand("serve", "Serve interactive sessions over HTTP");
  serve->add_option("--model", model, "Model directory")->required();
  serve->add_option("--scene", scene, "Initial scene JSON file")->required();
  serve->add_option("--port", port, "Port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--static", static_dir, "Directory of UI assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  try {
    if (*generate) return Generate(seed, count, profile, out, raw);
    if (*train) return Train(treebank, out);
    if (*parse) return ParseCommand(model, scene, sentence, mode, selection, seed, dump_gss);
    if (*evaluate) return Evaluate(treebank, folds, seed, report, timing_csv);
    if (*simulate) return Simulate(scene, script, model, out);
    if (*serve) return Serve(model, scene, port, host, static_dir);
  } catch (const Error &e) {
    std::cerr << "error " << ErrorCodeName(e.code()) << " (" << ErrorCategoryName(e.code())
              << "): " << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  }
  return 2;
}

}  // namespace
}  // namespace rcparse

int main(int argc, char **argv) { return rcparse::Main(argc, argv); }
