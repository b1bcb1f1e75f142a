/*
 * Copyright 2026 The polygam Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"
#include "format.h"

int main(int argc, char** argv) {
  using namespace polygam::cli;

  CLI::App app{"polygam: boosted piecewise-polynomial additive models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  auto* train = app.add_subcommand("train", "train a model from a config file");
  train->add_option("-c,--config", config_path, "INI config")->required();
  train->add_option("-o,--output", output_override,
                    "output directory (overrides [output] dir)");

  std::string model_path;
  std::string data_path;
  std::string out_path;
  auto* predict = app.add_subcommand("predict", "score a CSV file");
  predict->add_option("-m,--model", model_path, "model.json")->required();
  predict->add_option("-d,--data", data_path, "CSV with feature columns")
      ->required();
  predict->add_option("-o,--output", out_path, "predictions CSV")->required();

  ExplainArgs explain_args;
  std::string explain_model;
  std::string explain_out;
  std::vector<std::string> features;
  auto* explain =
      app.add_subcommand("explain", "export shape functions as CSV and SVG");
  explain->add_option("-m,--model", explain_model, "model.json")->required();
  explain->add_option("--features", features, "comma-separated feature names")
      ->delimiter(',');
  explain->add_option("--grid", explain_args.grid_points, "grid points")
      ->default_val(512);
  explain->add_flag("--ci", explain_args.with_ci, "add 95% confidence bands");
  explain->add_option("-o,--output", explain_out, "output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*train) {
    return RunGuarded(
        [&] {
          RunConfig config = LoadRunConfig(config_path);
          if (!output_override.empty()) config.output_dir = output_override;
          CmdTrain(config, std::cerr);
        },
        std::cerr);
  }
  if (*predict) {
    return RunGuarded(
        [&] {
          const auto loss = CmdPredict(model_path, data_path, out_path);
          if (loss) std::cout << "loss " << FormatNumber(*loss) << "\n";
        },
        std::cerr);
  }
  return RunGuarded(
      [&] {
        explain_args.model_path = explain_model;
        explain_args.out_dir = explain_out;
        explain_args.features = features;
        const std::size_t n = CmdExplain(explain_args);
        std::cout << "wrote " << n << " shape functions to " << explain_out
                  << "\n";
      },
      std::cerr);
}
