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

#include "eqodds/analysis.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "eqodds/errors.h"
#include "eqodds/format.h"
#include "eqodds/random.h"
#include "eqodds/roc.h"
#include "eqodds/tally.h"

namespace eqodds {
namespace {

// Linear interpolation between order statistics.
double Percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double position = q * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double fraction = position - static_cast<double>(lower);
  return values[lower] + fraction * (values[upper] - values[lower]);
}

PercentileInterval Interval(const std::vector<double>& values) {
  return {Percentile(values, 0.025), Percentile(values, 0.975)};
}

// First (group, label) cell of the tally with no rows, if any.
std::optional<std::pair<int, int>> EmptyCell(const EvalTally& tally) {
  for (std::size_t s = 0; s < tally.rows.size(); ++s) {
    for (int y = 0; y < 2; ++y) {
      if (tally.rows[s][y] == 0.0) return std::pair{static_cast<int>(s), y};
    }
  }
  return std::nullopt;
}

}  // namespace

void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& fn) {
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

BootstrapIntervals Bootstrap(const LabeledPredictions& data,
                             const ThresholdPolicy& policy,
                             const LossSpec& loss,
                             const BootstrapOptions& options) {
  if (options.n_resamples < 1) {
    throw UsageError("bootstrap needs at least one resample");
  }
  const auto probabilities = PositiveProbabilities(policy, data);
  const std::size_t n = data.size();
  std::vector<std::vector<std::size_t>> strata;
  if (options.stratified) {
    strata.resize(data.num_groups());
    for (std::size_t i = 0; i < n; ++i) strata[data.group_id(i)].push_back(i);
  }

  const auto resamples = static_cast<std::size_t>(options.n_resamples);
  std::vector<double> accuracy(resamples), violation(resamples),
      expected_loss(resamples);
  ParallelFor(resamples, options.workers, [&](std::size_t r) {
    std::mt19937_64 rng(MixSeed(options.seed, r));
    for (int attempt = 0;; ++attempt) {
      EvalTally tally(data.num_groups());
      auto add = [&](std::size_t i) {
        tally.Add(data.group_id(i), data.label(i), probabilities[i]);
      };
      if (options.stratified) {
        for (const auto& stratum : strata) {
          std::uniform_int_distribution<std::size_t> pick(0,
                                                           stratum.size() - 1);
          for (std::size_t k = 0; k < stratum.size(); ++k) {
            add(stratum[pick(rng)]);
          }
        }
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < n; ++k) add(pick(rng));
      }
      if (const auto empty = EmptyCell(tally)) {
        if (attempt + 1 >= options.max_attempts) {
          throw DegenerateGroupError(data.group_name(empty->first),
                                     empty->second);
        }
        continue;
      }
      const auto report = ReportFromTally(tally, data.groups(), loss, {});
      accuracy[r] = report.accuracy;
      violation[r] = report.violation;
      expected_loss[r] = report.expected_loss;
      return;
    }
  });
  return {Interval(accuracy), Interval(violation), Interval(expected_loss)};
}

std::vector<double> AlphaGrid(double grid_step, double alpha_max) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) {
    throw UsageError("grid step must lie in (0,1] (got " +
                     FormatDouble(grid_step) + ")");
  }
  if (!(alpha_max >= 0.0) || !std::isfinite(alpha_max)) {
    throw UsageError("alpha_max must be finite and nonnegative (got " +
                     FormatDouble(alpha_max) + ")");
  }
  const auto steps =
      static_cast<std::size_t>(std::floor(alpha_max / grid_step + 1e-9));
  std::vector<double> grid;
  for (std::size_t k = 0; k <= steps; ++k) {
    grid.push_back(RoundSignificant(static_cast<double>(k) * grid_step));
  }
  return grid;
}

std::vector<FrontierPoint> Sweep(const LabeledPredictions& fit,
                                 const LabeledPredictions& eval,
                                 const LossSpec& loss,
                                 const SweepOptions& options) {
  loss.Validate();
  const auto hulls = BuildGroupHulls(fit, options.roc);
  const auto prevalences = ComputePrevalences(fit);
  const double alpha_max = options.alpha_max.value_or(
      Unprocess(hulls, prevalences, loss).certified_alpha);
  const auto grid = AlphaGrid(options.grid_step, alpha_max);
  const EvalOptions eval_options{options.roc.allow_degenerate_groups};

  std::vector<FrontierPoint> frontier(grid.size());
  ParallelFor(grid.size(), options.workers, [&](std::size_t k) {
    const auto solution = SolveRelaxed(
        RelaxedProblem{hulls, prevalences, loss, grid[k]}, options.solver);
    const auto policy = PolicyFromSolution(solution, hulls, options.seed);
    const auto report = EvaluatePolicy(policy, eval, loss, eval_options);
    FrontierPoint& point = frontier[k];
    point.alpha = grid[k];
    point.accuracy = report.accuracy;
    point.expected_loss = report.expected_loss;
    point.violation = report.violation;
    if (options.bootstrap_n > 0) {
      BootstrapOptions bootstrap;
      bootstrap.n_resamples = options.bootstrap_n;
      bootstrap.seed = options.seed;
      point.ci = Bootstrap(eval, policy, loss, bootstrap);
    }
  });
  return frontier;
}

ModelSelection SelectBest(
    const std::map<std::string, LabeledPredictions>& models,
    const LossSpec& loss, const RocOptions& roc) {
  if (models.empty()) throw UsageError("no candidate models");
  const auto& [reference_id, reference] = *models.begin();
  for (const auto& [id, data] : models) {
    if (data.size() != reference.size()) {
      throw MismatchedRowsError("model '" + id + "' has " +
                                std::to_string(data.size()) + " rows, '" +
                                reference_id + "' has " +
                                std::to_string(reference.size()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.label(i) != reference.label(i) ||
          data.group_name(data.group_id(i)) !=
              reference.group_name(reference.group_id(i))) {
        throw MismatchedRowsError("model '" + id + "' disagrees with '" +
                                  reference_id + "' on the label or group "
                                  "of row " + std::to_string(i + 1));
      }
    }
  }

  ModelSelection selection;
  const EvalOptions eval_options{roc.allow_degenerate_groups};
  for (const auto& [id, data] : models) {
    const auto hulls = BuildGroupHulls(data, roc);
    const auto solution = Unprocess(hulls, ComputePrevalences(data), loss);
    const auto report = EvaluatePolicy(PolicyFromSolution(solution, hulls, 0),
                                       data, loss, eval_options);
    selection.candidates.push_back({id, report.accuracy, report.violation});
  }
  const auto best = std::min_element(
      selection.candidates.begin(), selection.candidates.end(),
      [](const CandidateSummary& a, const CandidateSummary& b) {
        if (a.unprocessed_accuracy != b.unprocessed_accuracy) {
          return a.unprocessed_accuracy > b.unprocessed_accuracy;
        }
        if (a.unprocessed_violation != b.unprocessed_violation) {
          return a.unprocessed_violation < b.unprocessed_violation;
        }
        return a.model_id < b.model_id;
      });
  selection.winner = best->model_id;
  return selection;
}

void WriteFrontierCsv(std::span<const FrontierPoint> frontier,
                      std::ostream& out) {
  out << "alpha,accuracy,violation,expected_loss,accuracy_p2_5,"
         "accuracy_p97_5,violation_p2_5,violation_p97_5\n";
  for (const auto& point : frontier) {
    out << FormatDouble(point.alpha) << ',' << FormatDouble(point.accuracy)
        << ',' << FormatDouble(point.violation) << ','
        << FormatDouble(point.expected_loss);
    if (point.ci) {
      out << ',' << FormatDouble(point.ci->accuracy.p2_5) << ','
          << FormatDouble(point.ci->accuracy.p97_5) << ','
          << FormatDouble(point.ci->violation.p2_5) << ','
          << FormatDouble(point.ci->violation.p97_5);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

}  // namespace eqodds
