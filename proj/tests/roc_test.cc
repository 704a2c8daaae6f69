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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "eqodds/errors.h"
#include "test_support.h"

namespace eqodds {
namespace {

using testing::FromTriples;
using PointSet = std::set<std::pair<double, double>>;

PointSet AsSet(const std::vector<RocPoint>& points) {
  PointSet set;
  for (const auto& p : points) set.insert({p.fpr, p.tpr});
  return set;
}

RocHull HullOf(std::vector<RocPoint> vertices) {
  RocHull hull;
  hull.group = "H";
  hull.vertices = std::move(vertices);
  hull.vertex_thresholds.resize(hull.vertices.size());
  return hull;
}

const RocHull& PerfectHull() {
  static const RocHull hull = HullOf({{0, 0}, {1, 1}, {0, 1}});
  return hull;
}

LabeledPredictions PerfectGroup() {
  return FromTriples(
      {{0.9, 1, "A"}, {0.8, 1, "A"}, {0.2, 0, "A"}, {0.1, 0, "A"}});
}

TEST(BuildRocTest, PerfectSeparationEnumeration) {
  const auto curve = BuildRoc(PerfectGroup(), "A");
  EXPECT_EQ(AsSet(curve.points),
            (PointSet{{0, 0}, {0, 0.5}, {0, 1}, {0.5, 1}, {1, 1}}));
  EXPECT_TRUE(curve.thresholds.front().is_always_negative());
  EXPECT_TRUE(curve.thresholds.back().is_always_positive());
  EXPECT_EQ(curve.points.front(), (RocPoint{0, 0}));
  EXPECT_EQ(curve.points.back(), (RocPoint{1, 1}));
}

TEST(BuildRocTest, IndistinguishableScoresGiveDiagonal) {
  const auto curve = BuildRoc(FromTriples({{0.7, 1, "A"}, {0.7, 0, "A"}}), "A");
  EXPECT_EQ(AsSet(curve.points), (PointSet{{0, 0}, {1, 1}}));
}

TEST(BuildRocTest, MissingLabelIsDegenerate) {
  const auto data = FromTriples({{0.7, 0, "A"}, {0.2, 0, "A"}, {0.5, 1, "B"}});
  try {
    BuildRoc(data, "A");
    FAIL() << "expected DegenerateGroupError";
  } catch (const DegenerateGroupError& e) {
    EXPECT_EQ(e.group(), "A");
    EXPECT_EQ(e.missing_label(), 1);
  }
  EXPECT_THROW(BuildRoc(data, "Z"), UnknownGroupError);

  const auto lenient = BuildRoc(data, "A", {.allow_degenerate_groups = true});
  EXPECT_EQ(lenient.missing_label, 1);
  const auto hull = BuildHull(lenient);
  EXPECT_EQ(AsSet(hull.vertices), (PointSet{{0, 0}, {1, 1}}));
}

TEST(BuildRocTest, ClosedThresholdsReproduceCounts) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto data = testing::RandomSmallDataset(rng, 40, 1, 3);
    for (std::size_t s = 0; s < data.num_groups(); ++s) {
      const auto curve = BuildRoc(data, static_cast<int>(s));
      PointSet expected;
      for (const auto& p : testing::CountingRoc(data, static_cast<int>(s))) {
        expected.insert({p.x, p.y});
      }
      EXPECT_EQ(AsSet(curve.points), expected);
      for (std::size_t k = 1; k < curve.points.size(); ++k) {
        EXPECT_LE(curve.points[k - 1].fpr, curve.points[k].fpr);
        EXPECT_LE(curve.points[k - 1].tpr, curve.points[k].tpr);
        EXPECT_GT(curve.thresholds[k - 1].value(), curve.thresholds[k].value());
      }
    }
  }
}

TEST(BuildRocTest, InvariantUnderRowPermutation) {
  testing::Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto data = testing::RandomSmallDataset(rng, 40, 2, 3);
    auto rows = data.Rows();
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto shuffled = LabeledPredictions::FromRows(rows);
    for (const auto& name : data.groups()) {
      const auto a = BuildRoc(data, name);
      const auto b = BuildRoc(shuffled, name);
      EXPECT_EQ(a.points, b.points);
      EXPECT_EQ(a.thresholds, b.thresholds);
    }
  }
}

TEST(BuildHullTest, Examples) {
  EXPECT_EQ(AsSet(BuildHull(BuildRoc(PerfectGroup(), "A")).vertices),
            (PointSet{{0, 0}, {0, 1}, {1, 1}}));

  const auto diagonal = BuildHull(
      BuildRoc(FromTriples({{0.7, 1, "A"}, {0.7, 0, "A"}}), "A"));
  EXPECT_EQ(AsSet(diagonal.vertices), (PointSet{{0, 0}, {1, 1}}));

  const auto anti = BuildHull(BuildRoc(
      FromTriples({{0.9, 0, "A"}, {0.8, 0, "A"}, {0.2, 1, "A"}, {0.1, 1, "A"}}),
      "A"));
  EXPECT_EQ(AsSet(anti.vertices), (PointSet{{0, 0}, {1, 0}, {1, 1}}));
  EXPECT_EQ(anti.vertices.front(), (RocPoint{0, 0}));
}

TEST(BuildHullTest, MatchesGiftWrappingOracle) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = testing::RandomSmallDataset(rng, 40, 1, 3);
    for (std::size_t s = 0; s < data.num_groups(); ++s) {
      const auto hull = BuildHull(BuildRoc(data, static_cast<int>(s)));
      PointSet expected;
      for (const auto& p : testing::JarvisHull(
               testing::CountingRoc(data, static_cast<int>(s)))) {
        expected.insert({p.x, p.y});
      }
      EXPECT_EQ(AsSet(hull.vertices), expected);
      EXPECT_GE(hull.Area(), -1e-15);
      // Every curve point lies in the hull; every vertex carries the
      // threshold that produces it.
      const auto curve = BuildRoc(data, static_cast<int>(s));
      for (const auto& p : curve.points) EXPECT_TRUE(Contains(hull, p));
      for (std::size_t k = 0; k < hull.size(); ++k) {
        const auto it = std::find(curve.thresholds.begin(),
                                  curve.thresholds.end(),
                                  hull.vertex_thresholds[k]);
        ASSERT_NE(it, curve.thresholds.end());
        EXPECT_EQ(curve.points[it - curve.thresholds.begin()],
                  hull.vertices[k]);
      }
    }
  }
}

TEST(ContainsTest, Examples) {
  EXPECT_TRUE(Contains(PerfectHull(), {0.25, 0.75}));
  EXPECT_FALSE(Contains(PerfectHull(), {0.75, 0.25}));
  EXPECT_TRUE(Contains(PerfectHull(), {0.0, 0.5}, 1e-9));
  EXPECT_FALSE(Contains(PerfectHull(), {-1e-6, 0.5}, 1e-9));
  EXPECT_TRUE(Contains(PerfectHull(), {-1e-10, 0.5}, 1e-9));
}

TEST(ContainsTest, SegmentHull) {
  const auto segment = HullOf({{0, 0}, {1, 1}});
  EXPECT_TRUE(Contains(segment, {0.3, 0.3}));
  EXPECT_FALSE(Contains(segment, {0.3, 0.31}));
}

TEST(DecomposeTest, Examples) {
  const auto& hull = PerfectHull();
  const int top = static_cast<int>(
      std::find(hull.vertices.begin(), hull.vertices.end(), RocPoint{0, 1}) -
      hull.vertices.begin());

  const auto vertex = Decompose(hull, {0, 1});
  ASSERT_EQ(vertex.entries.size(), 1u);
  EXPECT_EQ(vertex.entries[0].vertex, top);
  EXPECT_DOUBLE_EQ(vertex.entries[0].weight, 1.0);

  const auto edge = Decompose(hull, {0, 0.5});
  ASSERT_EQ(edge.entries.size(), 2u);
  for (const auto& e : edge.entries) EXPECT_NEAR(e.weight, 0.5, 1e-12);
  EXPECT_EQ(edge.Realize(hull), (RocPoint{0, 0.5}));

  const auto centroid = Decompose(hull, {1.0 / 3, 2.0 / 3});
  ASSERT_EQ(centroid.entries.size(), 3u);
  for (const auto& e : centroid.entries) EXPECT_NEAR(e.weight, 1.0 / 3, 1e-12);

  EXPECT_THROW(Decompose(hull, {0.9, 0.1}), OutsideHullError);
}

TEST(DecomposeTest, RealizesRandomInteriorPoints) {
  testing::Rng rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto data = testing::RandomSmallDataset(rng, 40, 1, 2);
    const auto hull = BuildHull(BuildRoc(data, 0));
    for (int k = 0; k < 20; ++k) {
      // Random convex combination of the vertices.
      std::vector<double> w(hull.size());
      double total = 0.0;
      for (auto& x : w) total += (x = unit(rng));
      RocPoint p{0, 0};
      for (std::size_t v = 0; v < hull.size(); ++v) {
        p.fpr += w[v] / total * hull.vertices[v].fpr;
        p.tpr += w[v] / total * hull.vertices[v].tpr;
      }
      const auto mixture = Decompose(hull, p);
      ASSERT_LE(mixture.entries.size(), 3u);
      EXPECT_NEAR(mixture.TotalWeight(), 1.0, 1e-12);
      for (const auto& e : mixture.entries) EXPECT_GE(e.weight, 0.0);
      const auto back = mixture.Realize(hull);
      EXPECT_NEAR(back.fpr, p.fpr, 1e-9);
      EXPECT_NEAR(back.tpr, p.tpr, 1e-9);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1200);
}

TEST(ThresholdTest, TextForms) {
  EXPECT_EQ(Threshold::AlwaysPositive().ToString(), "always_positive");
  EXPECT_EQ(Threshold::AlwaysNegative().ToString(), "always_negative");
  EXPECT_EQ(Threshold::At(0.1).ToString(), "0.1");
  EXPECT_EQ(Threshold::FromString("0.1"), Threshold::At(0.1));
  EXPECT_EQ(Threshold::FromString("always_positive"),
            Threshold::AlwaysPositive());
  EXPECT_FALSE(Threshold::FromString("abc").has_value());
  EXPECT_TRUE(Threshold::At(0.5).Accepts(0.5));
  EXPECT_FALSE(Threshold::AlwaysNegative().Accepts(1.0));
  EXPECT_TRUE(Threshold::AlwaysPositive().Accepts(0.0));
}

TEST(WriteRocCsvTest, HeaderAndVertexFlags) {
  const auto data = PerfectGroup();
  const auto curves = BuildGroupRocs(data);
  const auto hulls = BuildGroupHulls(data);
  std::ostringstream out;
  WriteRocCsv(curves, hulls, out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "group,fpr,tpr,threshold,is_vertex");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
  EXPECT_NE(text.find("A,0,1,0.8,1"), std::string::npos);
  EXPECT_NE(text.find("A,0,0.5,0.9,0"), std::string::npos);
}

}  // namespace
}  // namespace eqodds
