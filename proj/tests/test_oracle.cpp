#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "sapcensus/oracle.hpp"
#include "sapcensus/series.hpp"
#include "sapcensus/types.hpp"

using namespace sapcensus;

TEST_CASE("directed walk counts match the published square-lattice table") {
  const CountSeries c = enumerate_walks_oracle(10);
  const long expected[] = {1,    4,    12,    36,    100,  284,
                           780,  2172, 5916,  16268, 44100};
  for (int n = 0; n <= 10; ++n) CHECK(c.at(n) == expected[n]);
}

TEST_CASE("polygon counts match the published square-lattice table") {
  const CountSeries p = enumerate_polygons_oracle(14);
  std::map<int, long> expected = {{4, 1}, {6, 2}, {8, 7}, {10, 28},
                                  {12, 124}, {14, 588}};
  for (int n = 0; n <= 14; ++n) {
    const auto it = expected.find(n);
    CHECK(p.at(n) == (it == expected.end() ? 0 : it->second));
  }
}

TEST_CASE("odd perimeters are impossible") {
  const CountSeries p = enumerate_polygons_oracle(13);
  for (int n = 1; n <= 13; n += 2) CHECK(p.at(n) == 0);
}

TEST_CASE("inscribed counts for pinned small rectangles") {
  {
    const CountSeries s = inscribed_oracle(Rect{1, 1}, LatticeMode::Sap, 8);
    CHECK(s.at(4) == 1);
    for (int n = 0; n <= 8; ++n)
      if (n != 4) CHECK(s.at(n) == 0);
  }
  {
    const CountSeries s = inscribed_oracle(Rect{2, 2}, LatticeMode::Sap, 10);
    CHECK(s.at(8) == 5);
    for (int n = 0; n <= 10; ++n)
      if (n != 8) CHECK(s.at(n) == 0);
  }
  {
    const CountSeries s = inscribed_oracle(Rect{3, 1}, LatticeMode::Sap, 10);
    CHECK(s.at(8) == 1);  // only the 3x1 rectangle outline fits exactly
  }
  {
    const CountSeries s = inscribed_oracle(Rect{1, 0}, LatticeMode::Saw, 4);
    CHECK(s.at(1) == 1);
    CHECK(s.at(2) == 0);
  }
  {
    const CountSeries s = inscribed_oracle(Rect{0, 0}, LatticeMode::Saw, 4);
    CHECK(s.at(0) == 1);  // the single-vertex walk
  }
  {
    const CountSeries s = inscribed_oracle(Rect{3, 0}, LatticeMode::Saw, 6);
    CHECK(s.at(3) == 1);
  }
}

TEST_CASE("polygon census partitions by bounding box") {
  const int nmax = 12;
  const CountSeries whole = enumerate_polygons_oracle(nmax);
  CountSeries sum(nmax);
  for (int w = 1; 2 * (w + 1) <= nmax; ++w)
    for (int h = 1; 2 * (w + h) <= nmax; ++h) {
      const CountSeries part =
          inscribed_oracle(Rect{w, h}, LatticeMode::Sap, nmax);
      sum = merge_series(sum, part, 1);
    }
  CHECK(sum == whole);
}

TEST_CASE("walk census partitions by bounding box with a direction factor 2") {
  const int nmax = 8;
  const CountSeries whole = enumerate_walks_oracle(nmax);
  CountSeries sum(nmax);
  for (int w = 0; w <= nmax; ++w)
    for (int h = 0; h <= nmax; ++h) {
      if (w + h == 0 || w + h > nmax) continue;
      const CountSeries part =
          inscribed_oracle(Rect{w, h}, LatticeMode::Saw, nmax);
      sum = merge_series(sum, part, 1);
    }
  for (int n = 1; n <= nmax; ++n) CHECK(2 * sum.at(n) == whole.at(n));
}

TEST_CASE("inscribed counts are transpose symmetric") {
  const std::pair<int, int> rects[] = {{1, 2}, {2, 3}, {1, 4}, {3, 2}};
  for (const auto& [w, h] : rects) {
    CHECK(inscribed_oracle(Rect{w, h}, LatticeMode::Sap, 14) ==
          inscribed_oracle(Rect{h, w}, LatticeMode::Sap, 14));
    CHECK(inscribed_oracle(Rect{w, h}, LatticeMode::Saw, 9) ==
          inscribed_oracle(Rect{h, w}, LatticeMode::Saw, 9));
  }
}

TEST_CASE("feasibility guards refuse oversized runs unless overridden") {
  CHECK_THROWS_AS(enumerate_walks_oracle(21), UsageError);
  CHECK_THROWS_AS(enumerate_polygons_oracle(27), UsageError);
  CHECK_THROWS_AS(inscribed_oracle(Rect{1, 1}, LatticeMode::Sap, 27),
                  UsageError);
  CHECK_THROWS_AS(inscribed_oracle(Rect{1, 1}, LatticeMode::Saw, 21),
                  UsageError);
  // Override: the guard keys on nmax, so a tiny box stays cheap.
  const CountSeries s = inscribed_oracle(Rect{1, 1}, LatticeMode::Saw, 21, true);
  CHECK(s.at(2) == 4);  // the four bent two-step shapes
  CHECK(s.at(3) == 4);  // omit one of the unit square's four edges
  const CountSeries p = inscribed_oracle(Rect{1, 1}, LatticeMode::Sap, 27, true);
  CHECK(p.at(4) == 1);
}

TEST_CASE("small-argument validation") {
  CHECK_THROWS_AS(enumerate_walks_oracle(0), UsageError);
  CHECK_THROWS_AS(enumerate_polygons_oracle(3), UsageError);
  CHECK_THROWS_AS(inscribed_oracle(Rect{0, 2}, LatticeMode::Sap, 8),
                  UsageError);
  CHECK_THROWS_AS(inscribed_oracle(Rect{1, 1}, LatticeMode::Sap, -1),
                  UsageError);
}

namespace {

// Structural checks on an emitted edge set: vertex degrees, connectivity via
// union of edges, and exact bounding box.
void check_shape(const EdgeList& edges, Rect rect, LatticeMode mode) {
  REQUIRE(!edges.empty());
  std::map<std::pair<int, int>, int> degree;
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> seen;
  int min_x = 1 << 20, max_x = -(1 << 20), min_y = 1 << 20, max_y = -(1 << 20);
  for (const auto& e : edges) {
    const auto a = std::make_pair(e.first.x, e.first.y);
    const auto b = std::make_pair(e.second.x, e.second.y);
    CHECK(a < b);  // normalized edge orientation
    CHECK(seen.insert({a, b}).second);  // no duplicate edges
    ++degree[a];
    ++degree[b];
    for (const auto& v : {a, b}) {
      min_x = std::min(min_x, v.first);
      max_x = std::max(max_x, v.first);
      min_y = std::min(min_y, v.second);
      max_y = std::max(max_y, v.second);
    }
  }
  CHECK(max_x - min_x == rect.w);
  CHECK(max_y - min_y == rect.h);
  int odd = 0;
  for (const auto& [v, d] : degree) {
    CHECK(d <= 2);
    if (d == 1) ++odd;
  }
  CHECK(odd == (mode == LatticeMode::Sap ? 0 : 2));
}

}  // namespace

TEST_CASE("the inscribed enumerator emits well-formed shapes") {
  int count = 0;
  enumerate_inscribed(Rect{2, 2}, LatticeMode::Sap, 8, [&](const EdgeList& e) {
    ++count;
    CHECK(e.size() == 8);
    check_shape(e, Rect{2, 2}, LatticeMode::Sap);
  });
  CHECK(count == 5);

  // Visitor totals agree with the counting wrapper.
  std::map<std::size_t, int> by_len;
  enumerate_inscribed(Rect{2, 1}, LatticeMode::Saw, 7, [&](const EdgeList& e) {
    check_shape(e, Rect{2, 1}, LatticeMode::Saw);
    ++by_len[e.size()];
  });
  const CountSeries s = inscribed_oracle(Rect{2, 1}, LatticeMode::Saw, 7);
  for (int n = 1; n <= 7; ++n)
    CHECK(s.at(n) == (by_len.count(static_cast<std::size_t>(n))
                          ? by_len[static_cast<std::size_t>(n)]
                          : 0));
}
