#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hexnls/error.hpp"
#include "hexnls/honeycomb.hpp"

using namespace hexnls;

namespace {

// Independent count from the cell window: cell (i, j) owns the horizontal edge
// at offset 2j - i of L_i, the up edge after it, and the bridge down to
// L_{i+1} at its left end. Vertices are the distinct (path, offset) sites.
std::pair<int, int> window_counts(int R) {
  std::set<std::pair<int, int>> sites;
  int edges = 0;
  for (int i = -R; i <= R; ++i) {
    for (int j = -R; j <= R; ++j) {
      const int a = 2 * j - i;
      for (int k = 0; k <= 2; ++k) sites.insert({i, a + k});
      sites.insert({i + 1, a});
      edges += 3;
    }
  }
  return {static_cast<int>(sites.size()), edges};
}

}  // namespace

TEST(Honeycomb, SmallestTruncationIsValid) {
  const HoneycombLattice lat = build_honeycomb(1, 1.0);
  EXPECT_TRUE(validate(*lat.graph).empty());
  for (const Edge& e : lat.graph->edges()) EXPECT_DOUBLE_EQ(e.length, 1.0);
}

TEST(Honeycomb, InteriorVerticesHaveDegreeThree) {
  for (int R : {1, 2, 4}) {
    const HoneycombLattice lat = build_honeycomb(R, 0.7);
    const MetricGraph& g = *lat.graph;
    int interior = 0;
    for (const Vertex& v : g.vertices()) {
      EXPECT_LE(g.degree(v.id), 3);
      if (!v.boundary) {
        EXPECT_EQ(g.degree(v.id), 3);
        ++interior;
      }
    }
    EXPECT_GT(interior, 0);
  }
}

TEST(Honeycomb, CountsMatchCellWindow) {
  for (int R : {1, 2, 3, 5}) {
    const HoneycombLattice lat = build_honeycomb(R, 1.0);
    const auto [v, e] = window_counts(R);
    EXPECT_EQ(lat.graph->num_vertices(), v) << "R=" << R;
    EXPECT_EQ(lat.graph->num_edges(), e) << "R=" << R;
  }
  const HoneycombLattice lat = build_honeycomb(3, 1.0);
  EXPECT_EQ(lat.graph->num_vertices(), 7 * 16);
  EXPECT_EQ(lat.graph->num_edges(), 3 * 49);
}

TEST(Honeycomb, EdgeLengthsMatchLayout) {
  const HoneycombLattice lat = build_honeycomb(2, 1.5);
  const MetricGraph& g = *lat.graph;
  for (const Edge& e : g.edges()) {
    const Point2 a = g.vertex(e.tail).position;
    const Point2 b = g.vertex(e.head).position;
    EXPECT_NEAR(std::hypot(a.x - b.x, a.y - b.y), 1.5, 1e-12);
  }
}

TEST(Honeycomb, RejectsBadParameters) {
  EXPECT_THROW(build_honeycomb(0, 1.0), InvalidParameter);
  EXPECT_THROW(build_honeycomb(2, 0.0), InvalidParameter);
}

TEST(PathFamily, CentralPathAlternates) {
  const HoneycombLattice lat = build_honeycomb(3, 1.0);
  const MetricGraph& g = *lat.graph;
  const PathFamily paths = decompose_paths(lat);
  const std::vector<int>& l0 = paths.l_paths.at(0);
  // Walk right from the origin, then left.
  int v = lat.origin_vertex;
  std::size_t start = 0;
  for (; start < l0.size(); ++start) {
    const Edge& e = g.edge(l0[start]);
    if (e.tail == v) break;
  }
  ASSERT_LT(start, l0.size());
  for (std::size_t k = start; k < l0.size(); ++k) {
    EXPECT_EQ(step_direction(g, l0[k], v), k % 2 == start % 2 ? EdgeKind::horizontal : EdgeKind::up);
    v = g.other_end(l0[k], v);
  }
  v = lat.origin_vertex;
  for (std::size_t k = start; k-- > 0;) {
    const EdgeKind dir = step_direction(g, l0[k], v);
    EXPECT_EQ(dir, (start - 1 - k) % 2 == 0 ? EdgeKind::down : EdgeKind::horizontal);
    v = g.other_end(l0[k], v);
  }
}

TEST(PathFamily, PathsCrossInOneHorizontalEdge) {
  const HoneycombLattice lat = build_honeycomb(3, 1.0);
  const PathFamily paths = decompose_paths(lat);
  for (const auto& [i, li] : paths.l_paths) {
    const std::set<int> a(li.begin(), li.end());
    for (const auto& [j, rj] : paths.r_paths) {
      std::vector<int> common;
      for (int e : rj) {
        if (a.count(e)) common.push_back(e);
      }
      ASSERT_EQ(common.size(), 1u) << "i=" << i << " j=" << j;
      EXPECT_EQ(lat.graph->edge(common[0]).kind, EdgeKind::horizontal);
      EXPECT_EQ(paths.i_segments.at({i, j}).horizontal, common[0]);
    }
  }
}

TEST(PathFamily, PathsCoverEveryEdge) {
  const HoneycombLattice lat = build_honeycomb(2, 1.0);
  const PathFamily paths = decompose_paths(lat);
  std::vector<int> hits(static_cast<std::size_t>(lat.graph->num_edges()), 0);
  for (const auto& [i, es] : paths.l_paths)
    for (int e : es) ++hits[e];
  for (const auto& [j, es] : paths.r_paths)
    for (int e : es) ++hits[e];
  for (std::size_t e = 0; e < hits.size(); ++e) EXPECT_GE(hits[e], 1) << "edge " << e;
}

TEST(BridgeFamily, EveryNonPathEdgeOnExactlyOneLine) {
  const HoneycombLattice lat = build_honeycomb(2, 1.0);
  const PathFamily paths = decompose_paths(lat);
  const BridgeFamily bridges = decompose_bridges(lat);
  std::set<int> on_l;
  for (const auto& [i, es] : paths.l_paths) on_l.insert(es.begin(), es.end());
  std::map<int, int> seen;
  for (const auto& [k, line] : bridges.lines)
    for (const Bridge& b : line) ++seen[b.edge];
  for (int e = 0; e < lat.graph->num_edges(); ++e) {
    if (on_l.count(e)) {
      EXPECT_EQ(seen.count(e), 0u);
    } else {
      EXPECT_EQ(seen[e], 1) << "edge " << e;
    }
  }
}

TEST(BridgeFamily, CentralLineHasEvenIndices) {
  const HoneycombLattice lat = build_honeycomb(3, 1.0);
  const BridgeFamily bridges = decompose_bridges(lat);
  ASSERT_TRUE(bridges.lines.count(0));
  for (const Bridge& b : bridges.lines.at(0)) EXPECT_EQ(((b.j % 2) + 2) % 2, 0);
}

TEST(BridgeFamily, ZeroEndpointConvention) {
  const HoneycombLattice lat = build_honeycomb(3, 1.0);
  const BridgeFamily bridges = decompose_bridges(lat);
  for (const auto& [k, line] : bridges.lines) {
    for (const Bridge& b : line) {
      const LatticeSite s = lat.sites[static_cast<std::size_t>(b.zero_vertex)];
      EXPECT_EQ(s.path, b.j >= 0 ? b.j : b.j + 1);
      EXPECT_EQ(lat.graph->edge(b.edge).tail, b.zero_vertex);
    }
  }
}

TEST(SquareGrid, Counts) {
  const MetricGraph g1 = build_square_grid(1, 1.0);
  EXPECT_EQ(g1.num_vertices(), 9);
  EXPECT_EQ(g1.num_edges(), 12);
  const MetricGraph g2 = build_square_grid(2, 1.0);
  EXPECT_EQ(g2.num_vertices(), 25);
  EXPECT_EQ(g2.num_edges(), 40);
  for (const Vertex& v : g2.vertices()) {
    if (!v.boundary) EXPECT_EQ(g2.degree(v.id), 4);
  }
}

TEST(Exports, LayoutAndJson) {
  const HoneycombLattice lat = build_honeycomb(1, 1.0);
  const std::string csv = layout_csv(*lat.graph);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), lat.graph->num_edges() + 1);
  EXPECT_NE(layout_svg(*lat.graph).find("<svg"), std::string::npos);
  EXPECT_FALSE(paths_to_json(decompose_paths(lat)).empty());
  EXPECT_FALSE(bridges_to_json(decompose_bridges(lat)).empty());
}
