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

#include "eqodds/roc.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

#include "eqodds/errors.h"
#include "eqodds/format.h"

namespace eqodds {
namespace {

// Distance under which a point is snapped onto a vertex or an edge.
constexpr double kSnapTolerance = 1e-10;
// Mixture weights below this are dropped.
constexpr double kNegligibleWeight = 1e-12;

double Cross(RocPoint o, RocPoint a, RocPoint b) {
  return (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr);
}

double Distance(RocPoint a, RocPoint b) {
  return std::hypot(a.fpr - b.fpr, a.tpr - b.tpr);
}

// Parameter in [0,1] of the point of segment [a,b] closest to p.
double ProjectOntoSegment(RocPoint a, RocPoint b, RocPoint p) {
  const double dx = b.fpr - a.fpr;
  const double dy = b.tpr - a.tpr;
  const double length_sq = dx * dx + dy * dy;
  if (length_sq == 0.0) return 0.0;
  const double t = ((p.fpr - a.fpr) * dx + (p.tpr - a.tpr) * dy) / length_sq;
  return std::clamp(t, 0.0, 1.0);
}

RocPoint Lerp(RocPoint a, RocPoint b, double t) {
  return {a.fpr + t * (b.fpr - a.fpr), a.tpr + t * (b.tpr - a.tpr)};
}

double SegmentDistance(RocPoint a, RocPoint b, RocPoint p) {
  return Distance(Lerp(a, b, ProjectOntoSegment(a, b, p)), p);
}

// Index of the edge (i, i+1 mod n) closest to p.
std::size_t NearestEdge(const RocHull& hull, RocPoint p) {
  const std::size_t n = hull.size();
  const std::size_t num_edges = n == 2 ? 1 : n;
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < num_edges; ++i) {
    const double d =
        SegmentDistance(hull.vertices[i], hull.vertices[(i + 1) % n], p);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return best;
}

VertexMixture Normalized(std::vector<MixtureEntry> entries) {
  std::erase_if(entries, [](const MixtureEntry& e) {
    return e.weight < kNegligibleWeight;
  });
  double total = 0.0;
  for (const auto& e : entries) total += e.weight;
  for (auto& e : entries) e.weight /= total;
  std::sort(entries.begin(), entries.end(),
            [](const MixtureEntry& a, const MixtureEntry& b) {
              return a.vertex < b.vertex;
            });
  return VertexMixture{std::move(entries)};
}

VertexMixture EdgeMixture(const RocHull& hull, std::size_t edge, RocPoint p) {
  const std::size_t n = hull.size();
  const int a = static_cast<int>(edge);
  const int b = static_cast<int>((edge + 1) % n);
  const double t = ProjectOntoSegment(hull.vertices[a], hull.vertices[b], p);
  return Normalized({{a, 1.0 - t}, {b, t}});
}

struct ScoredLabel {
  double score;
  int label;
};

RocCurve CurveFromSamples(std::string group, std::vector<ScoredLabel> samples,
                          const RocOptions& options) {
  std::array<std::size_t, 2> totals{0, 0};
  for (const auto& s : samples) ++totals[s.label];
  RocCurve curve;
  curve.group = std::move(group);
  for (int y = 0; y < 2; ++y) {
    if (totals[y] > 0) continue;
    if (!options.allow_degenerate_groups) {
      throw DegenerateGroupError(curve.group, y);
    }
    curve.missing_label = y;
    curve.thresholds = {Threshold::AlwaysNegative(),
                        Threshold::AlwaysPositive()};
    curve.points = {{0.0, 0.0}, {1.0, 1.0}};
    return curve;
  }

  std::sort(samples.begin(), samples.end(),
            [](const ScoredLabel& a, const ScoredLabel& b) {
              return a.score > b.score;
            });
  curve.thresholds.push_back(Threshold::AlwaysNegative());
  curve.points.push_back({0.0, 0.0});
  std::array<std::size_t, 2> accepted{0, 0};
  const double negatives = static_cast<double>(totals[0]);
  const double positives = static_cast<double>(totals[1]);
  std::size_t i = 0;
  while (i < samples.size()) {
    const double score = samples[i].score;
    while (i < samples.size() && samples[i].score == score) {
      ++accepted[samples[i].label];
      ++i;
    }
    const RocPoint point{static_cast<double>(accepted[0]) / negatives,
                         static_cast<double>(accepted[1]) / positives};
    if (point == curve.points.back()) continue;
    curve.thresholds.push_back(Threshold::At(score));
    curve.points.push_back(point);
  }
  // The lowest score accepts everything; the sentinel names that corner.
  curve.thresholds.back() = Threshold::AlwaysPositive();
  return curve;
}

}  // namespace

std::string Threshold::ToString() const {
  if (is_always_positive()) return "always_positive";
  if (is_always_negative()) return "always_negative";
  return FormatRoundTrip(value_);
}

std::optional<Threshold> Threshold::FromString(std::string_view text) {
  if (text == "always_positive") return AlwaysPositive();
  if (text == "always_negative") return AlwaysNegative();
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return At(value);
}

double RocHull::Area() const {
  double twice_area = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % vertices.size()];
    twice_area += a.fpr * b.tpr - b.fpr * a.tpr;
  }
  return 0.5 * twice_area;
}

RocPoint VertexMixture::Realize(const RocHull& hull) const {
  RocPoint point{0.0, 0.0};
  for (const auto& e : entries) {
    point.fpr += e.weight * hull.vertices[e.vertex].fpr;
    point.tpr += e.weight * hull.vertices[e.vertex].tpr;
  }
  return point;
}

double VertexMixture::TotalWeight() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight;
  return total;
}

std::vector<RocCurve> BuildGroupRocs(const LabeledPredictions& data,
                                     const RocOptions& options) {
  std::vector<std::vector<ScoredLabel>> samples(data.num_groups());
  for (std::size_t i = 0; i < data.size(); ++i) {
    samples[data.group_id(i)].push_back({data.score(i), data.label(i)});
  }
  std::vector<RocCurve> curves;
  curves.reserve(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    curves.push_back(CurveFromSamples(data.groups()[s], std::move(samples[s]),
                                      options));
  }
  return curves;
}

RocCurve BuildRoc(const LabeledPredictions& data, int group_id,
                  const RocOptions& options) {
  if (group_id < 0 || group_id >= static_cast<int>(data.num_groups())) {
    throw UnknownGroupError("#" + std::to_string(group_id));
  }
  std::vector<ScoredLabel> samples;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.group_id(i) == group_id) {
      samples.push_back({data.score(i), data.label(i)});
    }
  }
  return CurveFromSamples(data.group_name(group_id), std::move(samples),
                          options);
}

RocCurve BuildRoc(const LabeledPredictions& data, std::string_view group,
                  const RocOptions& options) {
  const auto group_id = data.FindGroup(group);
  if (!group_id) throw UnknownGroupError(std::string(group));
  return BuildRoc(data, *group_id, options);
}

RocHull BuildHull(const RocCurve& curve, double collinear_tolerance) {
  // Andrew's monotone chain over point indices.
  std::vector<std::size_t> order(curve.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = curve.points[a];
    const auto& pb = curve.points[b];
    return pa.fpr != pb.fpr ? pa.fpr < pb.fpr : pa.tpr < pb.tpr;
  });

  std::vector<std::size_t> chain;
  auto extend = [&](std::size_t idx, std::size_t floor) {
    while (chain.size() >= floor + 2 &&
           Cross(curve.points[chain[chain.size() - 2]],
                 curve.points[chain.back()],
                 curve.points[idx]) <= collinear_tolerance) {
      chain.pop_back();
    }
    chain.push_back(idx);
  };
  for (std::size_t idx : order) extend(idx, 0);
  const std::size_t lower_size = chain.size();
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    extend(*it, lower_size - 1);
  }
  chain.pop_back();  // The first point closes the loop.

  RocHull hull;
  hull.group = curve.group;
  hull.missing_label = curve.missing_label;
  for (std::size_t idx : chain) {
    hull.vertices.push_back(curve.points[idx]);
    hull.vertex_thresholds.push_back(curve.thresholds[idx]);
  }
  return hull;
}

std::vector<RocHull> BuildGroupHulls(const LabeledPredictions& data,
                                     const RocOptions& options) {
  std::vector<RocHull> hulls;
  for (const auto& curve : BuildGroupRocs(data, options)) {
    hulls.push_back(BuildHull(curve));
  }
  return hulls;
}

bool Contains(const RocHull& hull, RocPoint point, double tolerance) {
  const std::size_t n = hull.size();
  if (n == 0) return false;
  if (n == 1) return Distance(hull.vertices[0], point) <= tolerance;
  if (n >= 3) {
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) {
      inside = Cross(hull.vertices[i], hull.vertices[(i + 1) % n], point) >= 0;
    }
    if (inside) return true;
  }
  const std::size_t edge = NearestEdge(hull, point);
  return SegmentDistance(hull.vertices[edge], hull.vertices[(edge + 1) % n],
                         point) <= tolerance;
}

VertexMixture Decompose(const RocHull& hull, RocPoint point) {
  if (!Contains(hull, point, kDecomposeTolerance)) {
    throw OutsideHullError("(" + FormatDouble(point.fpr) + ", " +
                           FormatDouble(point.tpr) + ") is not in the hull of "
                           "group '" + hull.group + "'");
  }
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (Distance(hull.vertices[i], point) <= kSnapTolerance) {
      return VertexMixture{{{static_cast<int>(i), 1.0}}};
    }
  }
  if (n == 1) return VertexMixture{{{0, 1.0}}};

  const std::size_t num_edges = n == 2 ? 1 : n;
  for (std::size_t i = 0; i < num_edges; ++i) {
    if (SegmentDistance(hull.vertices[i], hull.vertices[(i + 1) % n], point) <=
        kSnapTolerance) {
      return EdgeMixture(hull, i, point);
    }
  }

  const RocPoint origin = hull.vertices[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const RocPoint a = hull.vertices[k];
    const RocPoint b = hull.vertices[k + 1];
    const double area = Cross(origin, a, b);
    if (std::abs(area) < 1e-15) continue;
    const double wa = Cross(origin, point, b) / area;
    const double wb = Cross(origin, a, point) / area;
    const double w0 = 1.0 - wa - wb;
    constexpr double kSlack = -1e-12;
    if (w0 >= kSlack && wa >= kSlack && wb >= kSlack) {
      return Normalized({{0, std::max(w0, 0.0)},
                         {static_cast<int>(k), std::max(wa, 0.0)},
                         {static_cast<int>(k + 1), std::max(wb, 0.0)}});
    }
  }
  // Within tolerance but outside the polygon.
  return EdgeMixture(hull, NearestEdge(hull, point), point);
}

void WriteRocCsv(std::span<const RocCurve> curves,
                 std::span<const RocHull> hulls, std::ostream& out) {
  out << "group,fpr,tpr,threshold,is_vertex\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const auto& hull = hulls[c];
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
      const bool is_vertex =
          std::find(hull.vertex_thresholds.begin(),
                    hull.vertex_thresholds.end(),
                    curve.thresholds[k]) != hull.vertex_thresholds.end();
      out << curve.group << ',' << FormatDouble(curve.points[k].fpr) << ','
          << FormatDouble(curve.points[k].tpr) << ','
          << curve.thresholds[k].ToString() << ',' << (is_vertex ? 1 : 0)
          << '\n';
    }
  }
}

}  // namespace eqodds
