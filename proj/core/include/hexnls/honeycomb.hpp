#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hexnls/metric_graph.hpp"

namespace hexnls {

/// Position of a hexagonal-grid vertex: the index of the L-path it lies on
/// and its integer arclength coordinate along that path (in edges). The
/// coordinate origin of every L-path lies on the straight line through the
/// bridging edge at the origin vertex, so bridges join equal offsets.
struct LatticeSite {
  int path = 0;
  int offset = 0;
  auto operator<=>(const LatticeSite&) const = default;
};

/// Role of an edge in the path decomposition. Path edges (horizontal or up)
/// lie on L_path between offsets [offset, offset + 1]; bridges (down edges)
/// join L_path and L_{path+1} at `offset`, which is also the index of the
/// transversal line containing them.
struct EdgeRole {
  bool bridge = false;
  int path = 0;
  int offset = 0;
};

struct HoneycombLattice {
  std::shared_ptr<const MetricGraph> graph;
  double edge_length = 1.0;
  int origin_vertex = 0;
  int truncation_radius = 1;
  std::vector<LatticeSite> sites;  // per vertex
  std::vector<EdgeRole> roles;     // per edge
  std::map<LatticeSite, int> site_index;

  /// Vertex id at a lattice site, or -1 when the site is outside the truncation.
  [[nodiscard]] int vertex_at(LatticeSite site) const;
};

/// Horizontal edge plus the slanted edge completing a segment I_i^j (up edge
/// on the right) or J_j^i (bridge on the left).
struct SegmentPair {
  int horizontal = -1;
  int slanted = -1;
};

using IndexPair = std::pair<int, int>;

/// The two families of parallel paths covering the grid. L-paths are ordered
/// left to right; R-paths are ordered from their upper-left end down to the
/// right.
struct PathFamily {
  int radius = 0;
  std::map<int, std::vector<int>> l_paths;
  std::map<int, std::vector<int>> r_paths;
  std::map<IndexPair, SegmentPair> i_segments;  // key (i, j)
  std::map<IndexPair, SegmentPair> j_segments;  // key (j, i)
  std::map<IndexPair, int> v_vertices;          // key (i, j)
  std::map<IndexPair, int> w_vertices;          // key (j, i)
};

struct Bridge {
  int edge = -1;
  int j = 0;            // joins L_j and L_{j+1}
  int zero_vertex = -1;  // endpoint at bridge coordinate 0
};

/// Bridging edges grouped by the transversal straight line they lie on.
/// Line k runs through the vertex at offset k of every L-path.
struct BridgeFamily {
  std::map<int, std::vector<Bridge>> lines;
};

/// Truncation keeping the segments I_i^j and J_j^i for (i, j) in [-R, R]^2.
/// Vertices of degree below 3 are marked as boundary.
HoneycombLattice build_honeycomb(int truncation_radius, double edge_length);

PathFamily decompose_paths(const HoneycombLattice& lat);
BridgeFamily decompose_bridges(const HoneycombLattice& lat);

/// (2R+1) x (2R+1) square grid; perimeter vertices are boundary.
MetricGraph build_square_grid(int truncation_radius, double edge_length);

std::string paths_to_json(const PathFamily& paths, int indent = -1);
std::string bridges_to_json(const BridgeFamily& bridges, int indent = -1);

/// Layout export: one row per edge with endpoint positions.
std::string layout_csv(const MetricGraph& g);
std::string layout_svg(const MetricGraph& g, double scale = 20.0);

}  // namespace hexnls
