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

#ifndef EQODDS_FORMAT_H_
#define EQODDS_FORMAT_H_

#include <string>

namespace eqodds {

// Significant digits used for every reported metric.
inline constexpr int kReportDigits = 12;

// "%.12g" rendering.
std::string FormatDouble(double value);

// Shortest representation that parses back to exactly `value`.
std::string FormatRoundTrip(double value);

// `value` rounded to `digits` significant decimal digits.
double RoundSignificant(double value, int digits = kReportDigits);

}  // namespace eqodds

#endif  // EQODDS_FORMAT_H_
