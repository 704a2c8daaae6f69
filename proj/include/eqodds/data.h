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

// Prediction datasets: (score, label, group) rows and the population-level
// quantities derived from them.

#ifndef EQODDS_DATA_H_
#define EQODDS_DATA_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eqodds {

enum class DataFormat { kCsv, kJson };

// One input row. Groups are opaque strings.
struct PredictionRow {
  double score = 0.0;
  int label = 0;
  std::string group;

  bool operator==(const PredictionRow&) const = default;
};

// Immutable, validated table of prediction rows. Group indices are assigned
// in order of first appearance. Storage is columnar.
class LabeledPredictions {
 public:
  // Throws DomainError on an invalid score or label (the reported line is the
  // 1-based row index) and SchemaError when `rows` is empty.
  static LabeledPredictions FromRows(std::span<const PredictionRow> rows);

  std::size_t size() const { return scores_.size(); }
  std::size_t num_groups() const { return groups_.size(); }

  double score(std::size_t row) const { return scores_[row]; }
  int label(std::size_t row) const { return labels_[row]; }
  int group_id(std::size_t row) const { return group_ids_[row]; }
  const std::string& group_name(int group_id) const {
    return groups_[group_id];
  }

  std::span<const double> scores() const { return scores_; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  std::span<const int> group_ids() const { return group_ids_; }

  // Distinct groups in first-appearance order.
  const std::vector<std::string>& groups() const { return groups_; }
  std::optional<int> FindGroup(std::string_view name) const;

  std::size_t LabelCount(int label) const { return label_counts_[label]; }
  std::size_t GroupLabelCount(int group_id, int label) const {
    return group_label_counts_[group_id][label];
  }

  PredictionRow Row(std::size_t row) const;
  std::vector<PredictionRow> Rows() const;

  bool operator==(const LabeledPredictions& other) const;

 private:
  LabeledPredictions() = default;

  std::vector<double> scores_;
  std::vector<std::uint8_t> labels_;
  std::vector<int> group_ids_;
  std::vector<std::string> groups_;
  std::unordered_map<std::string, int> group_lookup_;
  std::array<std::size_t, 2> label_counts_{0, 0};
  std::vector<std::array<std::size_t, 2>> group_label_counts_;
};

// p_y = P[Y=y] and p_{s|y} = P[S=s | Y=y], indexed by group id.
struct Prevalences {
  std::array<double, 2> label{0.0, 0.0};
  std::vector<std::array<double, 2>> group_given_label;

  double p(int label_value) const { return label[label_value]; }
  double group_given(int group_id, int label_value) const {
    return group_given_label[group_id][label_value];
  }
  std::size_t num_groups() const { return group_given_label.size(); }
};

// Throws DegenerateLabelError when a label never occurs.
Prevalences ComputePrevalences(const LabeledPredictions& data);

// Misclassification costs. Correct predictions cost nothing.
struct LossSpec {
  double fp_cost = 1.0;  // l(1, 0)
  double fn_cost = 1.0;  // l(0, 1)

  // Throws UsageError unless both costs are nonnegative with positive sum.
  static LossSpec Create(double fp_cost, double fn_cost);
  void Validate() const;

  // Loss-minimizing threshold for group-calibrated scores.
  double CalibratedThreshold() const { return fp_cost / (fp_cost + fn_cost); }
};

// Throws ParseError, SchemaError or DomainError.
LabeledPredictions LoadPredictions(std::istream& in, DataFormat format);

// Format defaults to the file extension (".json" means JSON, anything else
// CSV). Unreadable files raise SchemaError.
LabeledPredictions LoadPredictionsFile(
    const std::string& path, std::optional<DataFormat> format = std::nullopt);

// Writes every score with round-trip precision so that loading the output
// reproduces `data` exactly.
void WritePredictions(const LabeledPredictions& data, std::ostream& out,
                      DataFormat format);

DataFormat FormatFromPath(std::string_view path);
std::optional<DataFormat> ParseDataFormat(std::string_view name);

}  // namespace eqodds

#endif  // EQODDS_DATA_H_
