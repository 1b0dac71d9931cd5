#include "hexnls/honeycomb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hexnls/error.hpp"
#include "json.hpp"

namespace hexnls {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Number of even integers in [0, n) extended additively to negative n, so
// evens_below(b) - evens_below(a) counts the even integers in [a, b).
int evens_below(int n) { return floor_div(n + 1, 2); }

// Offset of the origin of L_i along the transversal line through o, in edge
// lengths: the line alternates one bridge and a two-edge gap across a cell.
int line_offset(int path) {
  const int m = floor_div(path, 2);
  return 3 * m + (path - 2 * m);
}

Point2 site_position(LatticeSite s, double l) {
  static const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  const int c = line_offset(s.path);
  const int horizontal = evens_below(s.offset + s.path) - evens_below(s.path);
  const int slanted = s.offset - horizontal;
  const double x = -0.5 * c + horizontal + 0.5 * slanted;
  const double y = half_sqrt3 * c + half_sqrt3 * slanted;
  return {l * x, l * y};
}

bool is_horizontal_step(int path, int offset) { return ((offset + path) % 2 + 2) % 2 == 0; }

class LatticeBuilder {
 public:
  LatticeBuilder(HoneycombLattice& lat, MetricGraph& g) : lat_(lat), g_(g) {}

  int site(LatticeSite s) {
    auto it = lat_.site_index.find(s);
    if (it != lat_.site_index.end()) return it->second;
    const int id = g_.add_vertex(site_position(s, lat_.edge_length));
    lat_.site_index.emplace(s, id);
    lat_.sites.push_back(s);
    return id;
  }

  void path_edge(int path, int offset) {
    const int tail = site({path, offset});
    const int head = site({path, offset + 1});
    const EdgeKind kind = is_horizontal_step(path, offset) ? EdgeKind::horizontal : EdgeKind::up;
    g_.add_edge(tail, head, lat_.edge_length, kind);
    lat_.roles.push_back({false, path, offset});
  }

  // Bridge b_j^k between L_j and L_{j+1} at offset k; coordinate 0 sits on
  // L_j for j >= 0 and on L_{j+1} for j < 0.
  void bridge(int j, int k) {
    const int lower = site({j, k});
    const int upper = site({j + 1, k});
    if (j >= 0) {
      g_.add_edge(lower, upper, lat_.edge_length, EdgeKind::down);
    } else {
      g_.add_edge(upper, lower, lat_.edge_length, EdgeKind::down);
    }
    lat_.roles.push_back({true, j, k});
  }

 private:
  HoneycombLattice& lat_;
  MetricGraph& g_;
};

// Offset of the left end of the horizontal edge shared by L_i and R_j.
int crossing_offset(int i, int j) { return 2 * j - i; }

}  // namespace

int HoneycombLattice::vertex_at(LatticeSite site) const {
  const auto it = site_index.find(site);
  return it == site_index.end() ? -1 : it->second;
}

HoneycombLattice build_honeycomb(int truncation_radius, double edge_length) {
  if (truncation_radius < 1) throw InvalidParameter("build_honeycomb: truncation_radius must be >= 1");
  if (!(edge_length > 0.0) || !std::isfinite(edge_length)) {
    throw InvalidParameter("build_honeycomb: edge_length must be positive");
  }
  HoneycombLattice lat;
  lat.edge_length = edge_length;
  lat.truncation_radius = truncation_radius;
  auto g = std::make_shared<MetricGraph>();
  LatticeBuilder builder(lat, *g);
  const int R = truncation_radius;
  lat.origin_vertex = builder.site({0, 0});
  for (int i = -R; i <= R; ++i) {
    for (int j = -R; j <= R; ++j) {
      const int a = crossing_offset(i, j);
      builder.path_edge(i, a);      // horizontal edge L_i ∩ R_j
      builder.path_edge(i, a + 1);  // up edge on its right
      builder.bridge(i, a);         // bridge on its left, continuing R_j upwards
    }
  }
  for (int v = 0; v < g->num_vertices(); ++v) {
    if (g->degree(v) < 3) g->set_boundary(v, true);
  }
  lat.graph = std::move(g);
  return lat;
}

PathFamily decompose_paths(const HoneycombLattice& lat) {
  const MetricGraph& g = *lat.graph;
  const int R = lat.truncation_radius;
  std::map<std::pair<LatticeSite, LatticeSite>, int> by_ends;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    auto a = lat.sites[static_cast<std::size_t>(edge.tail)];
    auto b = lat.sites[static_cast<std::size_t>(edge.head)];
    if (b < a) std::swap(a, b);
    by_ends.emplace(std::make_pair(a, b), e);
  }
  const auto edge_between = [&](LatticeSite a, LatticeSite b) {
    if (b < a) std::swap(a, b);
    const auto it = by_ends.find({a, b});
    if (it == by_ends.end()) throw DegenerateInput("decompose_paths: lattice is missing an edge");
    return it->second;
  };

  PathFamily out;
  out.radius = R;
  for (int i = -R; i <= R; ++i) {
    for (int j = -R; j <= R; ++j) {
      const int a = crossing_offset(i, j);
      const int horizontal = edge_between({i, a}, {i, a + 1});
      const int up = edge_between({i, a + 1}, {i, a + 2});
      const int bridge = edge_between({i, a}, {i + 1, a});
      out.i_segments[{i, j}] = {horizontal, up};
      out.j_segments[{j, i}] = {horizontal, bridge};
      out.v_vertices[{i, j}] = lat.vertex_at({i, a});
      out.w_vertices[{j, i}] = lat.vertex_at({i, a});
    }
  }
  for (int i = -R; i <= R; ++i) {
    auto& path = out.l_paths[i];
    for (int j = -R; j <= R; ++j) {
      const SegmentPair seg = out.i_segments.at({i, j});
      path.push_back(seg.horizontal);
      path.push_back(seg.slanted);
    }
  }
  for (int j = -R; j <= R; ++j) {
    auto& path = out.r_paths[j];
    for (int i = R; i >= -R; --i) {
      const SegmentPair seg = out.j_segments.at({j, i});
      path.push_back(seg.slanted);
      path.push_back(seg.horizontal);
    }
  }
  return out;
}

BridgeFamily decompose_bridges(const HoneycombLattice& lat) {
  const MetricGraph& g = *lat.graph;
  BridgeFamily out;
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeRole& role = lat.roles[static_cast<std::size_t>(e)];
    if (!role.bridge) continue;
    out.lines[role.offset].push_back({e, role.path, g.edge(e).tail});
  }
  for (auto& [k, line] : out.lines) {
    std::sort(line.begin(), line.end(), [](const Bridge& a, const Bridge& b) { return a.j < b.j; });
  }
  return out;
}

MetricGraph build_square_grid(int truncation_radius, double edge_length) {
  if (truncation_radius < 1) throw InvalidParameter("build_square_grid: truncation_radius must be >= 1");
  if (!(edge_length > 0.0) || !std::isfinite(edge_length)) {
    throw InvalidParameter("build_square_grid: edge_length must be positive");
  }
  const int R = truncation_radius;
  const int side = 2 * R + 1;
  MetricGraph g;
  const auto id = [side, R](int a, int b) { return (b + R) * side + (a + R); };
  for (int b = -R; b <= R; ++b) {
    for (int a = -R; a <= R; ++a) {
      const bool rim = std::abs(a) == R || std::abs(b) == R;
      g.add_vertex({edge_length * a, edge_length * b}, rim);
    }
  }
  for (int b = -R; b <= R; ++b) {
    for (int a = -R; a <= R; ++a) {
      if (a < R) g.add_edge(id(a, b), id(a + 1, b), edge_length, EdgeKind::horizontal);
      if (b < R) g.add_edge(id(a, b), id(a, b + 1), edge_length, EdgeKind::up);
    }
  }
  return g;
}

std::string paths_to_json(const PathFamily& paths, int indent) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["radius"] = paths.radius;
  const auto path_list = [](const std::map<int, std::vector<int>>& m) {
    ojson arr = ojson::array();
    for (const auto& [index, edges] : m) {
      ojson item;
      item["index"] = index;
      item["edges"] = edges;
      arr.push_back(std::move(item));
    }
    return arr;
  };
  doc["L"] = path_list(paths.l_paths);
  doc["R"] = path_list(paths.r_paths);
  const auto segments = [](const std::map<IndexPair, SegmentPair>& m, const char* first, const char* second) {
    ojson arr = ojson::array();
    for (const auto& [key, seg] : m) {
      ojson item;
      item[first] = key.first;
      item[second] = key.second;
      item["horizontal"] = seg.horizontal;
      item["slanted"] = seg.slanted;
      arr.push_back(std::move(item));
    }
    return arr;
  };
  doc["I"] = segments(paths.i_segments, "i", "j");
  doc["J"] = segments(paths.j_segments, "j", "i");
  const auto vertices = [](const std::map<IndexPair, int>& m, const char* first, const char* second) {
    ojson arr = ojson::array();
    for (const auto& [key, v] : m) {
      ojson item;
      item[first] = key.first;
      item[second] = key.second;
      item["vertex"] = v;
      arr.push_back(std::move(item));
    }
    return arr;
  };
  doc["v"] = vertices(paths.v_vertices, "i", "j");
  doc["w"] = vertices(paths.w_vertices, "j", "i");
  return doc.dump(indent);
}

std::string bridges_to_json(const BridgeFamily& bridges, int indent) {
  using ojson = nlohmann::ordered_json;
  ojson doc = ojson::array();
  for (const auto& [k, line] : bridges.lines) {
    ojson item;
    item["k"] = k;
    ojson arr = ojson::array();
    for (const Bridge& b : line) {
      ojson entry;
      entry["j"] = b.j;
      entry["edge"] = b.edge;
      entry["zero_vertex"] = b.zero_vertex;
      arr.push_back(std::move(entry));
    }
    item["bridges"] = std::move(arr);
    doc.push_back(std::move(item));
  }
  return doc.dump(indent);
}

std::string layout_csv(const MetricGraph& g) {
  std::ostringstream out;
  out.precision(17);
  out << "edge_id,kind,tail,head,x0,y0,x1,y1\n";
  for (const Edge& e : g.edges()) {
    const Point2 a = g.vertex(e.tail).position;
    const Point2 b = g.vertex(e.head).position;
    out << e.id << ',' << to_string(e.kind) << ',' << e.tail << ',' << e.head << ',' << a.x << ',' << a.y << ','
        << b.x << ',' << b.y << '\n';
  }
  return out.str();
}

std::string layout_svg(const MetricGraph& g, double scale) {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (const Vertex& v : g.vertices()) {
    xmin = std::min(xmin, v.position.x);
    xmax = std::max(xmax, v.position.x);
    ymin = std::min(ymin, v.position.y);
    ymax = std::max(ymax, v.position.y);
  }
  const double pad = 1.0;
  const auto sx = [&](double x) { return (x - xmin + pad) * scale; };
  const auto sy = [&](double y) { return (ymax - y + pad) * scale; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (xmax - xmin + 2 * pad) * scale << "\" height=\""
      << (ymax - ymin + 2 * pad) * scale << "\">\n";
  for (const Edge& e : g.edges()) {
    const Point2 a = g.vertex(e.tail).position;
    const Point2 b = g.vertex(e.head).position;
    const char* colour = e.kind == EdgeKind::horizontal ? "black" : (e.kind == EdgeKind::up ? "steelblue" : "firebrick");
    out << "  <line x1=\"" << sx(a.x) << "\" y1=\"" << sy(a.y) << "\" x2=\"" << sx(b.x) << "\" y2=\"" << sy(b.y)
        << "\" stroke=\"" << colour << "\"/>\n";
  }
  for (const Vertex& v : g.vertices()) {
    out << "  <circle cx=\"" << sx(v.position.x) << "\" cy=\"" << sy(v.position.y) << "\" r=\"" << 0.08 * scale
        << "\" fill=\"" << (v.boundary ? "grey" : "black") << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace hexnls
