#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hexnls {

/// Lattice metadata attached to an edge. `up` edges rise when walked to the
/// right, `down` edges fall; chains that discretize half-lines use
/// `halfline_stub`.
enum class EdgeKind { horizontal, up, down, halfline_stub };

std::string_view to_string(EdgeKind kind);
EdgeKind edge_kind_from_string(std::string_view name);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vertex {
  int id = 0;
  Point2 position;
  /// True where the finite truncation cuts the infinite graph; functions in
  /// H^1 of the infinite graph extended by zero vanish here.
  bool boundary = false;
};

/// Edge with arclength coordinate x in [0, length], x = 0 at `tail`.
struct Edge {
  int id = 0;
  int tail = 0;
  int head = 0;
  double length = 1.0;
  EdgeKind kind = EdgeKind::horizontal;
};

struct Incidence {
  int edge = 0;
  bool at_tail = true;  // the vertex sits at coordinate 0 of `edge`
};

/// Finite metric graph. Vertex and edge ids are contiguous indices; the
/// per-vertex incidence lists are kept consistent by construction.
class MetricGraph {
 public:
  MetricGraph() = default;

  /// Builds a graph from raw parts without checking them. Incidences are
  /// recorded only for endpoints that name existing vertices, so `validate`
  /// can report the rest.
  static MetricGraph from_parts(std::vector<Vertex> vertices, std::vector<Edge> edges);

  int add_vertex(Point2 position, bool boundary = false);
  int add_edge(int tail, int head, double length, EdgeKind kind);
  void set_boundary(int vertex, bool boundary);

  [[nodiscard]] const std::vector<Vertex>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Vertex& vertex(int id) const { return vertices_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] std::span<const Incidence> incidences(int vertex) const;

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] int degree(int vertex) const { return static_cast<int>(incidences(vertex).size()); }
  [[nodiscard]] double total_length() const;
  [[nodiscard]] int other_end(int edge, int vertex) const;
  [[nodiscard]] int num_boundary_vertices() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

/// Path graph on [-half_length, half_length] with a vertex at 0. Each side is
/// a chain of unit edges; the outermost edge of a side is shorter when
/// half_length is not an integer. The two end vertices are boundary.
MetricGraph build_line(double half_length);

/// Star with `num_halflines` arms of length `arm_length`, each a unit chain
/// (outermost edge possibly shorter). Arm ends are boundary vertices.
MetricGraph build_star(int num_halflines, double arm_length);

/// One human-readable entry per broken invariant; empty when the graph is a
/// well-formed connected metric graph.
std::vector<std::string> validate(const MetricGraph& g);

/// Serializes as {"vertices":[{id,x,y,boundary}],"edges":[{id,tail,head,length,kind}]}
/// with stable key order.
std::string to_json(const MetricGraph& g, int indent = -1);
MetricGraph graph_from_json(std::string_view text);

/// Shortest-path (arclength) distance from the nearest source to each vertex.
std::vector<double> vertex_distances(const MetricGraph& g, std::span<const int> sources);

/// Vertices of a shortest path from `from` to `to`, both included. Ties go
/// to the smaller edge id.
std::vector<int> shortest_path(const MetricGraph& g, int from, int to);

/// Distance from every vertex to the nearest boundary vertex (infinity when
/// the graph has no boundary).
std::vector<double> distance_to_boundary(const MetricGraph& g);

/// Interior vertex farthest from the boundary; ties go to the smallest id.
int central_vertex(const MetricGraph& g);

/// Vertical direction of the step along `edge` starting at `from`, judged by
/// the layout positions.
EdgeKind step_direction(const MetricGraph& g, int edge, int from);

}  // namespace hexnls
