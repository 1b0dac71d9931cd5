#include "hexnls/graph_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hexnls/error.hpp"

namespace hexnls {

GraphFunction::GraphFunction(std::shared_ptr<const MetricGraph> graph, int samples_per_edge)
    : graph_(std::move(graph)), n_(samples_per_edge) {
  if (!graph_) throw InvalidParameter("GraphFunction: null graph");
  if (n_ < 2) throw InvalidParameter("GraphFunction: need at least 2 samples per edge");
  dofs_.assign(static_cast<std::size_t>(graph_->num_vertices()) +
                   static_cast<std::size_t>(graph_->num_edges()) * static_cast<std::size_t>(n_ - 2),
               0.0);
}

GraphFunction GraphFunction::from_vertex_values(std::shared_ptr<const MetricGraph> graph, int samples_per_edge,
                                                std::span<const double> vertex_values) {
  if (static_cast<int>(vertex_values.size()) != graph->num_vertices()) {
    throw InvalidParameter("from_vertex_values: one value per vertex required");
  }
  GraphFunction u(std::move(graph), samples_per_edge);
  const MetricGraph& g = u.graph();
  for (int v = 0; v < g.num_vertices(); ++v) u.set_vertex_value(v, vertex_values[static_cast<std::size_t>(v)]);
  const int n = u.samples_per_edge();
  for (const Edge& e : g.edges()) {
    const double a = u.vertex_value(e.tail);
    const double b = u.vertex_value(e.head);
    for (int k = 1; k < n - 1; ++k) {
      const double t = static_cast<double>(k) / (n - 1);
      u.set_interior(e.id, k, a + (b - a) * t);
    }
  }
  return u;
}

GraphFunction GraphFunction::from_callables(std::shared_ptr<const MetricGraph> graph, int samples_per_edge,
                                            const std::function<double(int)>& vertex_fn,
                                            const std::function<double(int, double)>& edge_fn) {
  GraphFunction u(std::move(graph), samples_per_edge);
  const MetricGraph& g = u.graph();
  for (int v = 0; v < g.num_vertices(); ++v) u.set_vertex_value(v, vertex_fn(v));
  const int n = u.samples_per_edge();
  for (const Edge& e : g.edges()) {
    const double h = e.length / (n - 1);
    for (int k = 1; k < n - 1; ++k) u.set_interior(e.id, k, edge_fn(e.id, k * h));
  }
  return u;
}

int GraphFunction::dof_index(int edge, int k) const {
  if (k == 0) return graph_->edge(edge).tail;
  if (k == n_ - 1) return graph_->edge(edge).head;
  return graph_->num_vertices() + edge * (n_ - 2) + (k - 1);
}

void GraphFunction::set_interior(int edge, int k, double value) {
  if (k <= 0 || k >= n_ - 1) throw InvalidParameter("set_interior: index is a vertex sample");
  dofs_[static_cast<std::size_t>(dof_index(edge, k))] = value;
}

std::vector<double> GraphFunction::edge_samples(int edge) const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k) out[static_cast<std::size_t>(k)] = sample(edge, k);
  return out;
}

GraphFunction& GraphFunction::operator*=(double c) {
  for (double& x : dofs_) x *= c;
  return *this;
}

GraphFunction GraphFunction::scaled(double c) const {
  GraphFunction out = *this;
  out *= c;
  return out;
}

bool GraphFunction::finite() const {
  return std::all_of(dofs_.begin(), dofs_.end(), [](double x) { return std::isfinite(x); });
}

namespace {

double abs_pow(double x, double p) {
  const double a = std::abs(x);
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

}  // namespace

double integrate_power(const GraphFunction& u, double p, Quadrature rule) {
  if (!(p >= 1.0)) throw InvalidParameter("integrate_power: p must be >= 1");
  const MetricGraph& g = u.graph();
  const int n = u.samples_per_edge();
  if (rule == Quadrature::simpson && (n - 1) % 2 != 0) {
    throw InvalidParameter("integrate_power: Simpson needs an even number of intervals per edge");
  }
  double total = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const double h = u.spacing(e);
    double sum = 0.0;
    if (rule == Quadrature::trapezoid) {
      sum = 0.5 * (abs_pow(u.sample(e, 0), p) + abs_pow(u.sample(e, n - 1), p));
      for (int k = 1; k < n - 1; ++k) sum += abs_pow(u.sample(e, k), p);
      total += h * sum;
    } else {
      sum = abs_pow(u.sample(e, 0), p) + abs_pow(u.sample(e, n - 1), p);
      for (int k = 1; k < n - 1; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * abs_pow(u.sample(e, k), p);
      total += h * sum / 3.0;
    }
  }
  return total;
}

GradientNorms gradient_norms(const GraphFunction& u) {
  const MetricGraph& g = u.graph();
  const int n = u.samples_per_edge();
  GradientNorms out;
  for (int e = 0; e < g.num_edges(); ++e) {
    const double h = u.spacing(e);
    double l1 = 0.0;
    double l2 = 0.0;
    double prev = u.sample(e, 0);
    for (int k = 1; k < n; ++k) {
      const double cur = u.sample(e, k);
      const double diff = cur - prev;
      l1 += std::abs(diff);
      l2 += diff * diff;
      prev = cur;
    }
    out.l1 += l1;
    out.l2sq += l2 / h;
  }
  return out;
}

NormReport norm_report(const GraphFunction& u, std::span<const double> p_list) {
  NormReport out;
  out.mass = integrate_power(u, 2.0);
  for (double p : p_list) out.lp[p] = integrate_power(u, p);
  for (double x : u.dofs()) out.linf = std::max(out.linf, std::abs(x));
  const GradientNorms grad = gradient_norms(u);
  out.grad_l1 = grad.l1;
  out.grad_l2sq = grad.l2sq;
  return out;
}

GraphFunction rescale_mass(const GraphFunction& u, double mu) {
  if (!(mu > 0.0)) throw InvalidParameter("rescale_mass: target mass must be positive");
  const double mass = integrate_power(u, 2.0);
  if (!(mass > 0.0)) throw DegenerateInput("rescale_mass: function has zero mass");
  return u.scaled(std::sqrt(mu / mass));
}

std::string function_csv(const GraphFunction& u) {
  std::ostringstream out;
  out.precision(17);
  out << "edge_id,sample_index,arclength_coordinate,value\n";
  const int n = u.samples_per_edge();
  for (int e = 0; e < u.graph().num_edges(); ++e) {
    const double h = u.spacing(e);
    for (int k = 0; k < n; ++k) out << e << ',' << k << ',' << k * h << ',' << u.sample(e, k) << '\n';
  }
  return out.str();
}

std::vector<double> lumped_weights(const GraphFunction& u) {
  const MetricGraph& g = u.graph();
  const int n = u.samples_per_edge();
  std::vector<double> w(static_cast<std::size_t>(u.num_dofs()), 0.0);
  for (const Edge& e : g.edges()) {
    const double h = u.spacing(e.id);
    w[static_cast<std::size_t>(e.tail)] += 0.5 * h;
    w[static_cast<std::size_t>(e.head)] += 0.5 * h;
    for (int k = 1; k < n - 1; ++k) w[static_cast<std::size_t>(u.dof_index(e.id, k))] = h;
  }
  return w;
}

std::vector<char> boundary_mask(const GraphFunction& u) {
  std::vector<char> mask(static_cast<std::size_t>(u.num_dofs()), 0);
  for (const Vertex& v : u.graph().vertices()) mask[static_cast<std::size_t>(v.id)] = v.boundary ? 1 : 0;
  return mask;
}

double boundary_mass_fraction(const GraphFunction& u, double radius) {
  const MetricGraph& g = u.graph();
  const auto dist = distance_to_boundary(g);
  const int n = u.samples_per_edge();
  double near = 0.0;
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const double h = u.spacing(e.id);
    double sum = 0.5 * (u.sample(e.id, 0) * u.sample(e.id, 0) + u.sample(e.id, n - 1) * u.sample(e.id, n - 1));
    for (int k = 1; k < n - 1; ++k) sum += u.sample(e.id, k) * u.sample(e.id, k);
    sum *= h;
    total += sum;
    const double d = std::min(dist[static_cast<std::size_t>(e.tail)], dist[static_cast<std::size_t>(e.head)]);
    if (d < radius) near += sum;
  }
  return total > 0.0 ? near / total : 0.0;
}

void zero_on_boundary(GraphFunction& u) {
  for (const Vertex& v : u.graph().vertices()) {
    if (v.boundary) u.set_vertex_value(v.id, 0.0);
  }
}

GraphFunction radial_function(const std::shared_ptr<const MetricGraph>& graph, int samples_per_edge, int center,
                              const std::function<double(double)>& profile) {
  const MetricGraph& g = *graph;
  const int sources[] = {center};
  const auto dist = vertex_distances(g, sources);
  GraphFunction u = GraphFunction::from_callables(
      graph, samples_per_edge, [&](int v) { return profile(dist[static_cast<std::size_t>(v)]); },
      [&](int e, double x) {
        const Edge& edge = g.edge(e);
        const double d = std::min(dist[static_cast<std::size_t>(edge.tail)] + x,
                                  dist[static_cast<std::size_t>(edge.head)] + edge.length - x);
        return profile(d);
      });
  zero_on_boundary(u);
  return u;
}

}  // namespace hexnls
