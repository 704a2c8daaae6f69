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

// Error hierarchy shared by every module. Each error belongs to a category
// that the command line tool maps onto its exit status.

#ifndef EQODDS_ERRORS_H_
#define EQODDS_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eqodds {

enum class ErrorCategory {
  kUsage,   // Invalid arguments or configuration.
  kData,    // Malformed or unusable input data.
  kSolver,  // Numerical failure while optimizing.
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

// Malformed row. `line` is 1-based and counts the header for CSV inputs; for
// JSON inputs it is the 1-based index of the offending array element.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(ErrorCategory::kData,
              "parse error at line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message)
      : Error(ErrorCategory::kData, "schema error: " + message) {}
};

// Score outside [0,1] or label outside {0,1}.
class DomainError : public Error {
 public:
  DomainError(std::size_t line, const std::string& reason)
      : Error(ErrorCategory::kData,
              "domain error at line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A label is absent from the whole dataset, so p_y = 0.
class DegenerateLabelError : public Error {
 public:
  explicit DegenerateLabelError(int missing_label)
      : Error(ErrorCategory::kData,
              "label " + std::to_string(missing_label) +
                  " never occurs; the loss objective is ill-posed"),
        missing_label_(missing_label) {}

  int missing_label() const { return missing_label_; }

 private:
  int missing_label_;
};

// A group lacks positives or negatives, so one of its rates is undefined.
class DegenerateGroupError : public Error {
 public:
  DegenerateGroupError(const std::string& group, int missing_label)
      : Error(ErrorCategory::kData,
              "group '" + group + "' has no samples with label " +
                  std::to_string(missing_label)),
        group_(group),
        missing_label_(missing_label) {}

  const std::string& group() const { return group_; }
  int missing_label() const { return missing_label_; }

 private:
  std::string group_;
  int missing_label_;
};

class UnknownGroupError : public Error {
 public:
  explicit UnknownGroupError(const std::string& group)
      : Error(ErrorCategory::kData, "unknown group '" + group + "'"),
        group_(group) {}

  const std::string& group() const { return group_; }

 private:
  std::string group_;
};

class MismatchedRowsError : public Error {
 public:
  explicit MismatchedRowsError(const std::string& message)
      : Error(ErrorCategory::kData, "mismatched rows: " + message) {}
};

class OutsideHullError : public Error {
 public:
  explicit OutsideHullError(const std::string& message)
      : Error(ErrorCategory::kSolver, "point outside hull: " + message) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& message)
      : Error(ErrorCategory::kSolver, "solver error: " + message) {}
};

}  // namespace eqodds

#endif  // EQODDS_ERRORS_H_
