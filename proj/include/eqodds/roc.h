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

// Per-group empirical ROC curves, their convex hulls, and the primitives the
// solver needs to express hull points as randomized threshold classifiers.
//
// The decision rule is closed: a threshold t predicts positive iff
// score >= t. Sentinel thresholds +inf and -inf encode the constant
// classifiers at the (0,0) and (1,1) corners.

#ifndef EQODDS_ROC_H_
#define EQODDS_ROC_H_

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqodds/data.h"

namespace eqodds {

inline constexpr double kCollinearTolerance = 1e-12;
inline constexpr double kContainmentTolerance = 1e-9;
// Precondition slack accepted by Decompose.
inline constexpr double kDecomposeTolerance = 1e-7;

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

class Threshold {
 public:
  constexpr Threshold() = default;
  static constexpr Threshold At(double value) { return Threshold(value); }
  static constexpr Threshold AlwaysPositive() {
    return Threshold(-std::numeric_limits<double>::infinity());
  }
  static constexpr Threshold AlwaysNegative() {
    return Threshold(std::numeric_limits<double>::infinity());
  }

  constexpr bool Accepts(double score) const { return score >= value_; }

  constexpr double value() const { return value_; }
  constexpr bool is_always_positive() const {
    return value_ == -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_always_negative() const {
    return value_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_sentinel() const {
    return is_always_positive() || is_always_negative();
  }

  // "always_positive", "always_negative" or the round-trip decimal value.
  std::string ToString() const;
  static std::optional<Threshold> FromString(std::string_view text);

  constexpr bool operator==(const Threshold&) const = default;

 private:
  constexpr explicit Threshold(double value) : value_(value) {}

  double value_ = std::numeric_limits<double>::infinity();
};

struct RocOptions {
  // Groups lacking a label normally raise DegenerateGroupError. When set,
  // such a group gets the diagonal segment as its hull and its undefined
  // rate is flagged through `missing_label`.
  bool allow_degenerate_groups = false;
};

// Empirical ROC of one group: points[k] = (FPR, TPR) under thresholds[k].
// Thresholds are strictly decreasing; the first is AlwaysNegative (0,0) and
// the last AlwaysPositive (1,1).
struct RocCurve {
  std::string group;
  std::vector<Threshold> thresholds;
  std::vector<RocPoint> points;
  // Set when the group has no samples of this label (lenient mode only).
  std::optional<int> missing_label;
};

// Convex hull of a RocCurve, counter-clockwise starting at (0,0). A curve
// lying on the diagonal yields the two-vertex segment (0,0)-(1,1).
struct RocHull {
  std::string group;
  std::vector<RocPoint> vertices;
  std::vector<Threshold> vertex_thresholds;
  std::optional<int> missing_label;

  std::size_t size() const { return vertices.size(); }
  double Area() const;
};

struct MixtureEntry {
  int vertex = 0;
  double weight = 0.0;
};

// Convex combination of at most three hull vertices.
struct VertexMixture {
  std::vector<MixtureEntry> entries;

  RocPoint Realize(const RocHull& hull) const;
  double TotalWeight() const;
};

// Throws UnknownGroupError or DegenerateGroupError.
RocCurve BuildRoc(const LabeledPredictions& data, std::string_view group,
                  const RocOptions& options = {});
RocCurve BuildRoc(const LabeledPredictions& data, int group_id,
                  const RocOptions& options = {});

// One curve per group, in group-id order, from a single pass over the data.
std::vector<RocCurve> BuildGroupRocs(const LabeledPredictions& data,
                                     const RocOptions& options = {});

RocHull BuildHull(const RocCurve& curve,
                  double collinear_tolerance = kCollinearTolerance);

std::vector<RocHull> BuildGroupHulls(const LabeledPredictions& data,
                                     const RocOptions& options = {});

// True iff `point` is inside the hull or within `tolerance` (Euclidean) of it.
bool Contains(const RocHull& hull, RocPoint point,
              double tolerance = kContainmentTolerance);

// Expresses `point` as a mixture of hull vertices: a matching vertex yields a
// single entry, a point on an edge the two endpoints of the first such edge,
// and an interior point the first triangle of the fan rooted at vertex 0
// that contains it. Throws OutsideHullError when `point` is farther than
// kDecomposeTolerance from the hull.
VertexMixture Decompose(const RocHull& hull, RocPoint point);

// Debug export with columns group,fpr,tpr,threshold,is_vertex. `hulls` must
// be parallel to `curves`.
void WriteRocCsv(std::span<const RocCurve> curves,
                 std::span<const RocHull> hulls, std::ostream& out);

}  // namespace eqodds

#endif  // EQODDS_ROC_H_
