// Copyright 2026 The Somno Authors.
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

#include <CLI11.hpp>

#include <iostream>

#include "commands.h"
#include "config.h"
#include "log.h"
#include "somno/error.h"

namespace {

using somno::cli::kExitDataFailure;
using somno::cli::kExitUsage;

struct ConfigArgs {
  std::string config;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.config, "Run configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", args.overrides,
                  "Override a config value, e.g. --set model.l2_strength=0.5");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sleep staging from polysomnography: feature extraction, "
               "linear model training and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "somno 0.1.0");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Print an EDF header as JSON");
  inspect->add_option("edf", inspect_path, "EDF/EDF+ file")->required();

  ConfigArgs extract_args;
  bool force = false;
  auto* extract = app.add_subcommand("extract", "Extract per-recording feature matrices");
  add_config_options(extract, extract_args);
  extract->add_flag("--force", force, "Recompute even when outputs are current");

  ConfigArgs train_args;
  std::optional<std::string> model_out;
  auto* train = app.add_subcommand("train", "Fit the linear pipeline on all recordings");
  add_config_options(train, train_args);
  train->add_option("-m,--model", model_out, "Model output (default <output_dir>/model.json)");

  ConfigArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate (LFS) or direct transfer (DT)");
  add_config_options(evaluate, eval_args);

  ConfigArgs predict_args;
  std::string model_in;
  std::optional<std::string> recording, features, output;
  auto* predict = app.add_subcommand("predict", "Score one recording with a trained model");
  add_config_options(predict, predict_args);
  predict->add_option("-m,--model", model_in, "Model JSON")->required()->check(CLI::ExistingFile);
  auto* rec_opt = predict->add_option("-r,--recording", recording, "Recording id in the dataset");
  auto* feat_opt = predict->add_option("-f,--features", features, "Feature file (.f64)");
  rec_opt->excludes(feat_opt);
  predict->add_option("-o,--output", output, "Output CSV");

  ConfigArgs project_args;
  std::optional<std::string> project_out;
  auto* project = app.add_subcommand("project", "Two-component PCA of the feature vectors");
  add_config_options(project, project_args);
  project->add_option("-o,--output", project_out, "Output CSV (default <output_dir>/pca.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  auto to_path = [](const std::optional<std::string>& s) -> std::optional<std::filesystem::path> {
    if (!s) return std::nullopt;
    return std::filesystem::path(*s);
  };
  const char* command = app.get_subcommands().front()->get_name().c_str();
  try {
    using namespace somno::cli;
    if (*inspect) return cmd_inspect(inspect_path);
    if (*extract) return cmd_extract(load_config(extract_args.config, extract_args.overrides), force);
    if (*train) {
      return cmd_train(load_config(train_args.config, train_args.overrides), to_path(model_out));
    }
    if (*evaluate) return cmd_evaluate(load_config(eval_args.config, eval_args.overrides));
    if (*predict) {
      return cmd_predict(load_config(predict_args.config, predict_args.overrides), model_in,
                         recording, to_path(features), to_path(output));
    }
    if (*project) {
      return cmd_project(load_config(project_args.config, project_args.overrides),
                         to_path(project_out));
    }
  } catch (const somno::cli::UsageError& e) {
    somno::cli::log_event("error", "usage", {{"command", command}, {"error", e.what()}});
    return kExitUsage;
  } catch (const somno::ParseError& e) {
    somno::cli::log_event("error", "parse", {{"command", command}, {"error", e.what()}});
    return *inspect ? kExitUsage : kExitDataFailure;
  } catch (const std::exception& e) {
    somno::cli::log_event("error", "failed", {{"command", command}, {"error", e.what()}});
    return *inspect ? kExitUsage : kExitDataFailure;
  }
  return kExitUsage;
}
