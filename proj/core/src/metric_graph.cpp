#include "hexnls/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "hexnls/error.hpp"
#include "json.hpp"

namespace hexnls {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::horizontal:
      return "horizontal";
    case EdgeKind::up:
      return "up";
    case EdgeKind::down:
      return "down";
    case EdgeKind::halfline_stub:
      return "halfline-stub";
  }
  return "horizontal";
}

EdgeKind edge_kind_from_string(std::string_view name) {
  if (name == "horizontal") return EdgeKind::horizontal;
  if (name == "up") return EdgeKind::up;
  if (name == "down") return EdgeKind::down;
  if (name == "halfline-stub") return EdgeKind::halfline_stub;
  throw InvalidParameter("unknown edge kind '" + std::string(name) + "'");
}

MetricGraph MetricGraph::from_parts(std::vector<Vertex> vertices, std::vector<Edge> edges) {
  MetricGraph g;
  g.vertices_ = std::move(vertices);
  g.edges_ = std::move(edges);
  g.adjacency_.assign(g.vertices_.size(), {});
  const auto valid = [&](int v) { return v >= 0 && v < g.num_vertices(); };
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    const Edge& edge = g.edges_[e];
    if (valid(edge.tail)) g.adjacency_[static_cast<std::size_t>(edge.tail)].push_back({static_cast<int>(e), true});
    if (valid(edge.head)) g.adjacency_[static_cast<std::size_t>(edge.head)].push_back({static_cast<int>(e), false});
  }
  return g;
}

int MetricGraph::add_vertex(Point2 position, bool boundary) {
  const int id = num_vertices();
  vertices_.push_back({id, position, boundary});
  adjacency_.emplace_back();
  return id;
}

int MetricGraph::add_edge(int tail, int head, double length, EdgeKind kind) {
  if (tail < 0 || tail >= num_vertices() || head < 0 || head >= num_vertices()) {
    throw InvalidParameter("add_edge: endpoint out of range");
  }
  if (tail == head) throw InvalidParameter("add_edge: self-loop");
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidParameter("add_edge: length must be positive");
  const int id = num_edges();
  edges_.push_back({id, tail, head, length, kind});
  adjacency_[static_cast<std::size_t>(tail)].push_back({id, true});
  adjacency_[static_cast<std::size_t>(head)].push_back({id, false});
  return id;
}

void MetricGraph::set_boundary(int vertex, bool boundary) {
  vertices_.at(static_cast<std::size_t>(vertex)).boundary = boundary;
}

std::span<const Incidence> MetricGraph::incidences(int vertex) const {
  return adjacency_.at(static_cast<std::size_t>(vertex));
}

double MetricGraph::total_length() const {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.length;
  return sum;
}

int MetricGraph::other_end(int edge, int vertex) const {
  const Edge& e = this->edge(edge);
  return e.tail == vertex ? e.head : e.tail;
}

int MetricGraph::num_boundary_vertices() const {
  return static_cast<int>(std::count_if(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.boundary; }));
}

namespace {

// Appends a chain from `from` along `direction`, unit edges with a shorter
// last edge. Returns the far vertex.
int append_chain(MetricGraph& g, int from, Point2 direction, double length) {
  int current = from;
  double covered = 0.0;
  const Point2 base = g.vertex(from).position;
  while (covered < length) {
    const double step = std::min(1.0, length - covered);
    if (step <= 1e-12 * length) break;
    covered += step;
    const int next = g.add_vertex({base.x + covered * direction.x, base.y + covered * direction.y});
    g.add_edge(current, next, step, EdgeKind::halfline_stub);
    current = next;
  }
  return current;
}

}  // namespace

MetricGraph build_line(double half_length) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidParameter("build_line: half_length must be positive");
  }
  MetricGraph g;
  const int center = g.add_vertex({0.0, 0.0});
  const int left = append_chain(g, center, {-1.0, 0.0}, half_length);
  const int right = append_chain(g, center, {1.0, 0.0}, half_length);
  g.set_boundary(left, true);
  g.set_boundary(right, true);
  return g;
}

MetricGraph build_star(int num_halflines, double arm_length) {
  if (num_halflines < 2) throw InvalidParameter("build_star: need at least 2 half-lines");
  if (!(arm_length > 0.0) || !std::isfinite(arm_length)) {
    throw InvalidParameter("build_star: arm_length must be positive");
  }
  MetricGraph g;
  const int center = g.add_vertex({0.0, 0.0});
  for (int a = 0; a < num_halflines; ++a) {
    const double angle = std::numbers::pi + 2.0 * std::numbers::pi * a / num_halflines;
    const int end = append_chain(g, center, {std::cos(angle), std::sin(angle)}, arm_length);
    g.set_boundary(end, true);
  }
  return g;
}

std::vector<std::string> validate(const MetricGraph& g) {
  std::vector<std::string> problems;
  const int nv = g.num_vertices();
  for (int v = 0; v < nv; ++v) {
    if (g.vertices()[static_cast<std::size_t>(v)].id != v) {
      problems.push_back("vertex " + std::to_string(v) + ": id " +
                         std::to_string(g.vertices()[static_cast<std::size_t>(v)].id) + " not contiguous");
    }
  }
  std::vector<int> expected_degree(static_cast<std::size_t>(nv), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edges()[static_cast<std::size_t>(e)];
    const std::string tag = "edge " + std::to_string(e) + ": ";
    if (edge.id != e) problems.push_back(tag + "id " + std::to_string(edge.id) + " not contiguous");
    bool endpoints_ok = true;
    for (int end : {edge.tail, edge.head}) {
      if (end < 0 || end >= nv) {
        problems.push_back(tag + "endpoint " + std::to_string(end) + " undefined");
        endpoints_ok = false;
      } else {
        ++expected_degree[static_cast<std::size_t>(end)];
      }
    }
    if (endpoints_ok && edge.tail == edge.head) problems.push_back(tag + "self-loop at " + std::to_string(edge.tail));
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) problems.push_back(tag + "non-positive length");
  }
  for (int v = 0; v < nv; ++v) {
    const auto inc = g.incidences(v);
    if (static_cast<int>(inc.size()) != expected_degree[static_cast<std::size_t>(v)]) {
      problems.push_back("vertex " + std::to_string(v) + ": adjacency size " + std::to_string(inc.size()) +
                         " != incident edge count " + std::to_string(expected_degree[static_cast<std::size_t>(v)]));
    }
    for (const Incidence& in : inc) {
      const Edge& edge = g.edge(in.edge);
      if ((in.at_tail ? edge.tail : edge.head) != v) {
        problems.push_back("vertex " + std::to_string(v) + ": incidence with edge " + std::to_string(in.edge) +
                           " has wrong orientation");
      }
    }
  }
  if (nv > 0) {
    std::vector<char> seen(static_cast<std::size_t>(nv), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const Incidence& in : g.incidences(v)) {
        const int w = g.other_end(in.edge, v);
        if (w >= 0 && w < nv && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached != nv) {
      problems.push_back("not connected: " + std::to_string(reached) + " of " + std::to_string(nv) +
                         " vertices reachable from vertex 0");
    }
  }
  return problems;
}

std::string to_json(const MetricGraph& g, int indent) {
  nlohmann::ordered_json doc;
  auto& vertices = doc["vertices"] = nlohmann::ordered_json::array();
  for (const Vertex& v : g.vertices()) {
    nlohmann::ordered_json item;
    item["id"] = v.id;
    item["x"] = v.position.x;
    item["y"] = v.position.y;
    item["boundary"] = v.boundary;
    vertices.push_back(std::move(item));
  }
  auto& edges = doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::ordered_json item;
    item["id"] = e.id;
    item["tail"] = e.tail;
    item["head"] = e.head;
    item["length"] = e.length;
    item["kind"] = std::string(to_string(e.kind));
    edges.push_back(std::move(item));
  }
  return doc.dump(indent);
}

MetricGraph graph_from_json(std::string_view text) {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    for (const auto& item : doc.at("vertices")) {
      vertices.push_back({item.at("id").get<int>(),
                          {item.at("x").get<double>(), item.at("y").get<double>()},
                          item.value("boundary", false)});
    }
    for (const auto& item : doc.at("edges")) {
      edges.push_back({item.at("id").get<int>(), item.at("tail").get<int>(), item.at("head").get<int>(),
                       item.at("length").get<double>(), edge_kind_from_string(item.at("kind").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& err) {
    throw InvalidParameter(std::string("graph_from_json: ") + err.what());
  }
  return MetricGraph::from_parts(std::move(vertices), std::move(edges));
}

std::vector<double> vertex_distances(const MetricGraph& g, std::span<const int> sources) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(g.num_vertices()), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (int s : sources) {
    dist.at(static_cast<std::size_t>(s)) = 0.0;
    queue.emplace(0.0, s);
  }
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (const Incidence& in : g.incidences(v)) {
      const int w = g.other_end(in.edge, v);
      const double nd = d + g.edge(in.edge).length;
      if (nd < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  return dist;
}

std::vector<int> shortest_path(const MetricGraph& g, int from, int to) {
  const int sources[] = {from};
  const auto dist = vertex_distances(g, sources);
  if (!std::isfinite(dist.at(static_cast<std::size_t>(to)))) throw DegenerateInput("shortest_path: unreachable");
  std::vector<int> path{to};
  int v = to;
  while (v != from) {
    int next = -1;
    int via = std::numeric_limits<int>::max();
    for (const Incidence& in : g.incidences(v)) {
      const int w = g.other_end(in.edge, v);
      const double through = dist[static_cast<std::size_t>(w)] + g.edge(in.edge).length;
      if (std::abs(through - dist[static_cast<std::size_t>(v)]) <= 1e-9 * (1.0 + through) && in.edge < via &&
          dist[static_cast<std::size_t>(w)] < dist[static_cast<std::size_t>(v)]) {
        via = in.edge;
        next = w;
      }
    }
    v = next;
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<double> distance_to_boundary(const MetricGraph& g) {
  std::vector<int> sources;
  for (const Vertex& v : g.vertices()) {
    if (v.boundary) sources.push_back(v.id);
  }
  return vertex_distances(g, sources);
}

int central_vertex(const MetricGraph& g) {
  if (g.num_vertices() == 0) throw DegenerateInput("central_vertex: empty graph");
  const auto dist = distance_to_boundary(g);
  int best = 0;
  for (int v = 1; v < g.num_vertices(); ++v) {
    if (dist[static_cast<std::size_t>(v)] > dist[static_cast<std::size_t>(best)] + 1e-12) best = v;
  }
  return best;
}

EdgeKind step_direction(const MetricGraph& g, int edge, int from) {
  const int to = g.other_end(edge, from);
  const double dy = g.vertex(to).position.y - g.vertex(from).position.y;
  const double scale = g.edge(edge).length;
  if (std::abs(dy) <= 1e-9 * scale) return EdgeKind::horizontal;
  return dy > 0.0 ? EdgeKind::up : EdgeKind::down;
}

}  // namespace hexnls
