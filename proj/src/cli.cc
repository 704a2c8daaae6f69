/*
 * Copyright 2026 The eqodds Authors.
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

#include "eqodds/cli.h"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "eqodds/analysis.h"
#include "eqodds/errors.h"
#include "eqodds/format.h"
#include "eqodds/policy.h"
#include "eqodds/roc.h"
#include "eqodds/solver.h"

namespace eqodds {
namespace {

constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::kFit, "fit"},
    {Command::kPredict, "predict"},
    {Command::kEval, "eval"},
    {Command::kSweep, "sweep"},
    {Command::kUnprocess, "unprocess"},
    {Command::kSelect, "select"},
    {Command::kCalibratedThreshold, "calibrated-threshold"},
};

void Require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

LossSpec Loss(const RunConfig& config) {
  return LossSpec::Create(config.fp_cost, config.fn_cost);
}

RocOptions Roc(const RunConfig& config) {
  return RocOptions{config.allow_degenerate_groups};
}

LabeledPredictions Load(const RunConfig& config, const std::string& path) {
  return LoadPredictionsFile(path, config.format);
}

// Places schema_version and config ahead of the payload fields.
Json WithConfig(const Json& payload, const RunConfig& config) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config.ToJson();
  for (const auto& [key, value] : payload.items()) {
    if (key != "schema_version") doc[key] = value;
  }
  return doc;
}

std::string FitLike(const RunConfig& config, double alpha) {
  const auto data = Load(config, config.data_path);
  const auto loss = Loss(config);
  const auto roc = Roc(config);
  const auto hulls = BuildGroupHulls(data, roc);
  const auto prevalences = ComputePrevalences(data);
  const auto solution =
      std::isinf(alpha)
          ? Unprocess(hulls, prevalences, loss)
          : SolveRelaxed(RelaxedProblem{hulls, prevalences, loss, alpha});
  if (!config.roc_export_path.empty()) {
    std::ofstream roc_out(config.roc_export_path);
    Require(static_cast<bool>(roc_out),
            "cannot write '" + config.roc_export_path + "'");
    WriteRocCsv(BuildGroupRocs(data, roc), hulls, roc_out);
  }
  const auto policy = PolicyFromSolution(solution, hulls, config.seed);
  return WithConfig(SolutionToJson(solution, policy), config).dump(2) + "\n";
}

std::string PredictCommand(const RunConfig& config) {
  const auto data = Load(config, config.data_path);
  const auto recorded = LoadSolutionFile(config.solution_path, config.seed);
  std::ostringstream out;
  WritePredictionsCsv(data, PredictBatch(recorded.policy, data), out);
  return out.str();
}

std::string EvalCommand(const RunConfig& config) {
  const auto data = Load(config, config.data_path);
  const auto recorded = LoadSolutionFile(config.solution_path, config.seed);
  const auto loss = Loss(config);
  const EvalOptions options{config.allow_degenerate_groups};
  const auto report =
      config.sampled ? EvaluateSampled(recorded.policy, data, loss, options)
                     : EvaluatePolicy(recorded.policy, data, loss, options);
  std::optional<BootstrapIntervals> ci;
  if (config.bootstrap_n > 0) {
    BootstrapOptions bootstrap;
    bootstrap.n_resamples = config.bootstrap_n;
    bootstrap.seed = config.seed;
    bootstrap.workers = config.threads;
    ci = Bootstrap(data, recorded.policy, loss, bootstrap);
  }
  Json doc = WithConfig(EvalReportToJson(report, ci), config);
  doc["mode"] = config.sampled ? "sampled" : "analytic";
  return doc.dump(2) + "\n";
}

std::string SweepCommand(const RunConfig& config) {
  const auto fit = Load(config, config.data_path);
  const auto eval =
      config.eval_path.empty() ? fit : Load(config, config.eval_path);
  SweepOptions options;
  options.grid_step = config.grid_step;
  options.alpha_max = config.alpha_max;
  options.bootstrap_n = config.bootstrap_n;
  options.seed = config.seed;
  options.workers = config.threads;
  options.roc = Roc(config);
  std::ostringstream out;
  WriteFrontierCsv(Sweep(fit, eval, Loss(config), options), out);
  return out.str();
}

std::string SelectCommand(const RunConfig& config) {
  std::map<std::string, LabeledPredictions> models;
  for (const auto& [id, path] : config.models) {
    Require(models.emplace(id, Load(config, path)).second,
            "duplicate model id '" + id + "'");
  }
  const auto selection = SelectBest(models, Loss(config), Roc(config));
  return WithConfig(SelectionToJson(selection), config).dump(2) + "\n";
}

std::string Execute(const RunConfig& config) {
  switch (config.command) {
    case Command::kFit:
      return FitLike(config, *config.alpha);
    case Command::kUnprocess:
      return FitLike(config, kUnconstrained);
    case Command::kPredict:
      return PredictCommand(config);
    case Command::kEval:
      return EvalCommand(config);
    case Command::kSweep:
      return SweepCommand(config);
    case Command::kSelect:
      return SelectCommand(config);
    case Command::kCalibratedThreshold:
      return FormatDouble(Loss(config).CalibratedThreshold()) + "\n";
  }
  throw UsageError("unknown command");
}

int ExitCode(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kUsage:
      return kExitUsage;
    case ErrorCategory::kData:
      return kExitData;
    case ErrorCategory::kSolver:
      return kExitSolver;
  }
  return 1;
}

}  // namespace

std::string CommandName(Command command) {
  for (const auto& [value, name] : kCommandNames) {
    if (value == command) return name;
  }
  return "unknown";
}

void RunConfig::Validate() const {
  const bool needs_data = command != Command::kSelect &&
                          command != Command::kCalibratedThreshold;
  Require(!needs_data || !data_path.empty(),
          CommandName(command) + " needs --data");
  if (command == Command::kPredict || command == Command::kEval) {
    Require(!solution_path.empty(), CommandName(command) + " needs --solution");
  }
  if (command == Command::kFit) Require(alpha.has_value(), "fit needs --alpha");
  if (command == Command::kSelect) {
    Require(!models.empty(), "select needs at least one --model");
  }
  if (alpha) {
    Require(*alpha >= 0.0 && *alpha <= 1.0,
            "--alpha must lie in [0,1] (got " + FormatDouble(*alpha) + ")");
  }
  Require(grid_step > 0.0 && grid_step <= 1.0,
          "--grid-step must lie in (0,1] (got " + FormatDouble(grid_step) +
              ")");
  if (alpha_max) {
    Require(std::isfinite(*alpha_max) && *alpha_max >= 0.0,
            "--alpha-max must be finite and nonnegative");
  }
  Require(bootstrap_n >= 0, "--bootstrap-n must be nonnegative");
  Require(threads >= 1, "--threads must be positive");
  LossSpec::Create(fp_cost, fn_cost);
}

Json RunConfig::ToJson() const {
  auto optional_number = [](const std::optional<double>& value) {
    return value ? Json(*value) : Json(nullptr);
  };
  Json models_json = Json::array();
  for (const auto& [id, path] : models) {
    models_json.push_back({{"id", id}, {"path", path}});
  }
  Json doc;
  doc["command"] = CommandName(command);
  doc["data"] = data_path;
  doc["eval"] = eval_path;
  doc["solution"] = solution_path;
  doc["models"] = std::move(models_json);
  doc["alpha"] = optional_number(alpha);
  doc["fp_cost"] = fp_cost;
  doc["fn_cost"] = fn_cost;
  doc["grid_step"] = grid_step;
  doc["alpha_max"] = optional_number(alpha_max);
  doc["bootstrap_n"] = bootstrap_n;
  doc["seed"] = seed;
  doc["output"] = output_path;
  doc["format"] = !format                        ? Json(nullptr)
                  : *format == DataFormat::kJson ? Json("json")
                                                 : Json("csv");
  doc["roc_export"] = roc_export_path;
  doc["allow_degenerate_groups"] = allow_degenerate_groups;
  doc["sampled"] = sampled;
  return doc;
}

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.Validate();
    const std::string artifact = Execute(config);
    if (config.output_path.empty() || config.output_path == "-") {
      out << artifact;
    } else {
      std::ofstream file(config.output_path, std::ios::binary);
      Require(static_cast<bool>(file),
              "cannot write '" + config.output_path + "'");
      file << artifact;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "eqodds: " << e.what() << '\n';
    return ExitCode(e.category());
  } catch (const nlohmann::json::exception& e) {
    err << "eqodds: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "eqodds: internal error: " << e.what() << '\n';
    return 1;
  }
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Equalized-odds postprocessing of score-based classifiers"};
  app.require_subcommand(1);
  RunConfig config;
  std::string format;
  std::vector<std::string> models;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--fp-cost", config.fp_cost, "Cost of a false positive");
    sub->add_option("--fn-cost", config.fn_cost, "Cost of a false negative");
    sub->add_option("--output,-o", config.output_path,
                    "Artifact path (default stdout)");
    sub->add_option("--seed", config.seed, "Random seed");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", config.data_path, "Predictions file (CSV/JSON)");
    sub->add_option("--format", format, "Input format: csv or json");
    sub->add_flag("--allow-degenerate-groups", config.allow_degenerate_groups,
                  "Tolerate groups missing one label");
  };

  std::map<CLI::App*, Command> commands;
  for (const auto& [command, name] : kCommandNames) {
    CLI::App* sub = app.add_subcommand(name);
    commands[sub] = command;
    add_common(sub);
    switch (command) {
      case Command::kFit:
        sub->description("Solve the relaxed equalized-odds problem");
        add_data(sub);
        sub->add_option("--alpha", config.alpha, "Allowed violation in [0,1]");
        sub->add_option("--roc-export", config.roc_export_path,
                        "Write per-group ROC curves and hulls as CSV");
        break;
      case Command::kUnprocess:
        sub->description("Most accurate per-group thresholds, unconstrained");
        add_data(sub);
        sub->add_option("--roc-export", config.roc_export_path,
                        "Write per-group ROC curves and hulls as CSV");
        break;
      case Command::kPredict:
        sub->description("Apply a solution to predictions");
        add_data(sub);
        sub->add_option("--solution", config.solution_path, "Solution JSON");
        break;
      case Command::kEval:
        sub->description("Evaluate a solution");
        add_data(sub);
        sub->add_option("--solution", config.solution_path, "Solution JSON");
        sub->add_option("--bootstrap-n", config.bootstrap_n,
                        "Bootstrap resamples (0 disables)");
        sub->add_flag("--sampled", config.sampled,
                      "Score one realization instead of expected rates");
        sub->add_option("--threads", config.threads, "Worker threads");
        break;
      case Command::kSweep:
        sub->description("Fairness-accuracy frontier over a grid of alphas");
        add_data(sub);
        sub->add_option("--eval", config.eval_path,
                        "Evaluation split (default: the fit data)");
        sub->add_option("--grid-step", config.grid_step, "Alpha grid step");
        sub->add_option("--alpha-max", config.alpha_max,
                        "Largest alpha (default: unprocessed violation)");
        sub->add_option("--bootstrap-n", config.bootstrap_n,
                        "Bootstrap resamples per alpha (0 disables)");
        sub->add_option("--threads", config.threads, "Worker threads");
        break;
      case Command::kSelect:
        sub->description("Pick the most accurate unprocessed model");
        sub->add_option("--model", models, "Candidate as id=path")
            ->allow_extra_args(false);
        sub->add_option("--format", format, "Input format: csv or json");
        sub->add_flag("--allow-degenerate-groups",
                      config.allow_degenerate_groups,
                      "Tolerate groups missing one label");
        break;
      case Command::kCalibratedThreshold:
        sub->description("Bayes-optimal threshold for calibrated scores");
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (const auto& [sub, command] : commands) {
    if (sub->parsed()) config.command = command;
  }
  if (!format.empty()) {
    config.format = ParseDataFormat(format);
    if (!config.format) {
      err << "eqodds: unknown format '" << format << "'\n";
      return kExitUsage;
    }
  }
  for (const auto& spec : models) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      err << "eqodds: --model expects id=path (got '" << spec << "')\n";
      return kExitUsage;
    }
    config.models.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
  }
  return Run(config, out, err);
}

}  // namespace eqodds
