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

#include "eqodds/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "eqodds/errors.h"
#include "eqodds/format.h"
#include "json.hpp"

namespace eqodds {
namespace {

constexpr std::string_view kWhitespace = " \t\r\n";

std::string_view Trim(std::string_view text) {
  const auto begin = text.find_first_not_of(kWhitespace);
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(kWhitespace);
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      return fields;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::optional<double> ParseDouble(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

void CheckScore(double score, std::size_t line) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw DomainError(line, "score " + FormatDouble(score) +
                                " is outside [0,1]");
  }
}

int CheckLabel(double label, std::size_t line) {
  if (label != 0.0 && label != 1.0) {
    throw DomainError(line, "label " + FormatDouble(label) +
                                " is not 0 or 1");
  }
  return static_cast<int>(label);
}

std::vector<PredictionRow> ParseCsv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, header_line)) {
    ++line_number;
    if (!Trim(header_line).empty()) break;
  }
  if (Trim(header_line).empty()) throw SchemaError("missing CSV header row");
  header = SplitCommas(header_line);

  int score_col = -1, label_col = -1, group_col = -1;
  for (int col = 0; col < static_cast<int>(header.size()); ++col) {
    const auto name = header[col];
    int* target = name == "score"   ? &score_col
                  : name == "label" ? &label_col
                  : name == "group" ? &group_col
                                    : nullptr;
    if (target == nullptr) continue;
    if (*target != -1) {
      throw SchemaError("duplicate column '" + std::string(name) + "'");
    }
    *target = col;
  }
  for (const auto& [col, name] : {std::pair{score_col, "score"},
                                  std::pair{label_col, "label"},
                                  std::pair{group_col, "group"}}) {
    if (col < 0) {
      throw SchemaError(std::string("missing required column '") + name + "'");
    }
  }

  std::vector<PredictionRow> rows;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCommas(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_number,
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()));
    }
    const auto score = ParseDouble(fields[score_col]);
    if (!score) {
      throw ParseError(line_number, "score '" + std::string(fields[score_col]) +
                                        "' is not a number");
    }
    const auto label = ParseDouble(fields[label_col]);
    if (!label) {
      throw ParseError(line_number, "label '" + std::string(fields[label_col]) +
                                        "' is not a number");
    }
    if (fields[group_col].empty()) {
      throw ParseError(line_number, "empty group");
    }
    CheckScore(*score, line_number);
    rows.push_back(PredictionRow{*score, CheckLabel(*label, line_number),
                                 std::string(fields[group_col])});
  }
  return rows;
}

std::vector<PredictionRow> ParseJson(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto line =
        1 + std::count(text.begin(), text.begin() + offset, '\n');
    throw ParseError(line, e.what());
  }
  if (!doc.is_array()) {
    throw SchemaError("JSON input must be an array of row objects");
  }
  std::vector<PredictionRow> rows;
  rows.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::size_t line = i + 1;
    if (!item.is_object()) throw ParseError(line, "row is not an object");
    for (const char* key : {"score", "label", "group"}) {
      if (!item.contains(key)) {
        throw SchemaError(std::string("row ") + std::to_string(line) +
                          " lacks key '" + key + "'");
      }
    }
    const auto& score = item["score"];
    const auto& label = item["label"];
    const auto& group = item["group"];
    if (!score.is_number()) throw ParseError(line, "score is not a number");
    if (!label.is_number()) throw ParseError(line, "label is not a number");
    std::string group_name;
    if (group.is_string()) {
      group_name = group.get<std::string>();
    } else if (group.is_number_integer()) {
      group_name = group.dump();
    } else {
      throw ParseError(line, "group must be a string or an integer");
    }
    if (group_name.empty()) throw ParseError(line, "empty group");
    const double score_value = score.get<double>();
    CheckScore(score_value, line);
    rows.push_back(PredictionRow{
        score_value, CheckLabel(label.get<double>(), line), group_name});
  }
  return rows;
}

}  // namespace

LabeledPredictions LabeledPredictions::FromRows(
    std::span<const PredictionRow> rows) {
  if (rows.empty()) throw SchemaError("dataset has no rows");
  LabeledPredictions data;
  data.scores_.reserve(rows.size());
  data.labels_.reserve(rows.size());
  data.group_ids_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    CheckScore(row.score, i + 1);
    const int label = CheckLabel(row.label, i + 1);
    auto [it, inserted] = data.group_lookup_.try_emplace(
        row.group, static_cast<int>(data.groups_.size()));
    if (inserted) {
      data.groups_.push_back(row.group);
      data.group_label_counts_.push_back({0, 0});
    }
    data.scores_.push_back(row.score);
    data.labels_.push_back(static_cast<std::uint8_t>(label));
    data.group_ids_.push_back(it->second);
    ++data.label_counts_[label];
    ++data.group_label_counts_[it->second][label];
  }
  return data;
}

std::optional<int> LabeledPredictions::FindGroup(std::string_view name) const {
  const auto it = group_lookup_.find(std::string(name));
  if (it == group_lookup_.end()) return std::nullopt;
  return it->second;
}

PredictionRow LabeledPredictions::Row(std::size_t row) const {
  return PredictionRow{scores_[row], labels_[row], groups_[group_ids_[row]]};
}

std::vector<PredictionRow> LabeledPredictions::Rows() const {
  std::vector<PredictionRow> rows;
  rows.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) rows.push_back(Row(i));
  return rows;
}

bool LabeledPredictions::operator==(const LabeledPredictions& other) const {
  return scores_ == other.scores_ && labels_ == other.labels_ &&
         group_ids_ == other.group_ids_ && groups_ == other.groups_;
}

Prevalences ComputePrevalences(const LabeledPredictions& data) {
  Prevalences prevalences;
  const double n = static_cast<double>(data.size());
  for (int y = 0; y < 2; ++y) {
    if (data.LabelCount(y) == 0) throw DegenerateLabelError(y);
    prevalences.label[y] = static_cast<double>(data.LabelCount(y)) / n;
  }
  prevalences.group_given_label.resize(data.num_groups());
  for (int s = 0; s < static_cast<int>(data.num_groups()); ++s) {
    for (int y = 0; y < 2; ++y) {
      prevalences.group_given_label[s][y] =
          static_cast<double>(data.GroupLabelCount(s, y)) /
          static_cast<double>(data.LabelCount(y));
    }
  }
  return prevalences;
}

LossSpec LossSpec::Create(double fp_cost, double fn_cost) {
  LossSpec loss{fp_cost, fn_cost};
  loss.Validate();
  return loss;
}

void LossSpec::Validate() const {
  if (!(fp_cost >= 0.0) || !(fn_cost >= 0.0) || !std::isfinite(fp_cost) ||
      !std::isfinite(fn_cost) || !(fp_cost + fn_cost > 0.0)) {
    throw UsageError("costs must be finite and nonnegative with a positive "
                     "sum (got fp_cost=" + FormatDouble(fp_cost) +
                     ", fn_cost=" + FormatDouble(fn_cost) + ")");
  }
}

LabeledPredictions LoadPredictions(std::istream& in, DataFormat format) {
  const auto rows = format == DataFormat::kCsv ? ParseCsv(in) : ParseJson(in);
  return LabeledPredictions::FromRows(rows);
}

LabeledPredictions LoadPredictionsFile(const std::string& path,
                                       std::optional<DataFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  return LoadPredictions(in, format.value_or(FormatFromPath(path)));
}

void WritePredictions(const LabeledPredictions& data, std::ostream& out,
                      DataFormat format) {
  if (format == DataFormat::kJson) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
      doc.push_back({{"score", data.score(i)},
                     {"label", data.label(i)},
                     {"group", data.group_name(data.group_id(i))}});
    }
    out << doc.dump() << '\n';
    return;
  }
  for (const auto& group : data.groups()) {
    if (group.find(',') != std::string::npos ||
        Trim(group).size() != group.size()) {
      throw SchemaError("group '" + group + "' cannot be written as CSV");
    }
  }
  out << "score,label,group\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << FormatRoundTrip(data.score(i)) << ',' << data.label(i) << ','
        << data.group_name(data.group_id(i)) << '\n';
  }
}

DataFormat FormatFromPath(std::string_view path) {
  constexpr std::string_view kJsonExt = ".json";
  if (path.size() >= kJsonExt.size() &&
      path.substr(path.size() - kJsonExt.size()) == kJsonExt) {
    return DataFormat::kJson;
  }
  return DataFormat::kCsv;
}

std::optional<DataFormat> ParseDataFormat(std::string_view name) {
  if (name == "csv") return DataFormat::kCsv;
  if (name == "json") return DataFormat::kJson;
  return std::nullopt;
}

}  // namespace eqodds
