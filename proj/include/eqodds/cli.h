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

// The `eqodds` command line.

#ifndef EQODDS_CLI_H_
#define EQODDS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqodds/data.h"
#include "eqodds/io.h"

namespace eqodds {

enum class Command {
  kFit,
  kPredict,
  kEval,
  kSweep,
  kUnprocess,
  kSelect,
  kCalibratedThreshold,
};

std::string CommandName(Command command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitSolver = 4;

struct RunConfig {
  Command command = Command::kFit;
  // Predictions to fit on, predict or evaluate. For `sweep`, the fit split.
  std::string data_path;
  // `sweep` only; defaults to the fit split.
  std::string eval_path;
  // `predict` and `eval`.
  std::string solution_path;
  // `select`: (model id, predictions path) pairs.
  std::vector<std::pair<std::string, std::string>> models;
  std::optional<double> alpha;
  double fp_cost = 1.0;
  double fn_cost = 1.0;
  double grid_step = 0.01;
  std::optional<double> alpha_max;
  int bootstrap_n = 0;
  std::uint64_t seed = 42;
  // Empty or "-" writes to stdout.
  std::string output_path;
  std::optional<DataFormat> format;
  std::string roc_export_path;
  bool allow_degenerate_groups = false;
  // `eval`: score one realization of the randomized policy.
  bool sampled = false;
  // Not recorded in artifacts; results do not depend on it.
  int threads = 1;

  // Throws UsageError.
  void Validate() const;
  Json ToJson() const;
};

// Runs a parsed configuration and returns the process exit code. Diagnostics
// go to `err`; artifacts go to `config.output_path` or `out`.
int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and runs it.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace eqodds

#endif  // EQODDS_CLI_H_
