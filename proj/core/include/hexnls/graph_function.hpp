#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hexnls/metric_graph.hpp"

namespace hexnls {

inline constexpr int kDefaultSamplesPerEdge = 33;

/// Real function on a metric graph sampled uniformly on every edge:
/// sample k of edge e sits at x_k = k * length / (n - 1). Endpoint samples are
/// the vertex values, stored once per vertex, so continuity holds exactly.
///
/// Degrees of freedom are laid out as [vertex values | edge interiors], with
/// the n - 2 interior samples of each edge stored contiguously.
class GraphFunction {
 public:
  GraphFunction(std::shared_ptr<const MetricGraph> graph, int samples_per_edge = kDefaultSamplesPerEdge);

  /// Piecewise-linear interpolation of vertex values.
  static GraphFunction from_vertex_values(std::shared_ptr<const MetricGraph> graph, int samples_per_edge,
                                          std::span<const double> vertex_values);

  /// Evaluates `vertex_fn` at vertices and `edge_fn(edge, x)` at interior
  /// sample coordinates x in (0, length).
  static GraphFunction from_callables(std::shared_ptr<const MetricGraph> graph, int samples_per_edge,
                                      const std::function<double(int)>& vertex_fn,
                                      const std::function<double(int, double)>& edge_fn);

  [[nodiscard]] const MetricGraph& graph() const { return *graph_; }
  [[nodiscard]] const std::shared_ptr<const MetricGraph>& graph_ptr() const { return graph_; }
  [[nodiscard]] int samples_per_edge() const { return n_; }
  [[nodiscard]] double spacing(int edge) const { return graph_->edge(edge).length / (n_ - 1); }

  [[nodiscard]] double vertex_value(int v) const { return dofs_[static_cast<std::size_t>(v)]; }
  void set_vertex_value(int v, double value) { dofs_[static_cast<std::size_t>(v)] = value; }

  /// Sample k in [0, n) of `edge`; k = 0 is the tail vertex, k = n - 1 the head.
  [[nodiscard]] double sample(int edge, int k) const { return dofs_[static_cast<std::size_t>(dof_index(edge, k))]; }
  void set_interior(int edge, int k, double value);
  [[nodiscard]] std::vector<double> edge_samples(int edge) const;

  [[nodiscard]] int dof_index(int edge, int k) const;
  [[nodiscard]] int num_dofs() const { return static_cast<int>(dofs_.size()); }
  [[nodiscard]] std::span<double> dofs() { return dofs_; }
  [[nodiscard]] std::span<const double> dofs() const { return dofs_; }

  GraphFunction& operator*=(double c);
  [[nodiscard]] GraphFunction scaled(double c) const;

  /// True when every sample is finite.
  [[nodiscard]] bool finite() const;

 private:
  std::shared_ptr<const MetricGraph> graph_;
  int n_;
  std::vector<double> dofs_;
};

enum class Quadrature { trapezoid, simpson };

/// Composite quadrature of |u|^p over the graph (p >= 1). Simpson needs an
/// even number of sample intervals per edge.
double integrate_power(const GraphFunction& u, double p, Quadrature rule = Quadrature::trapezoid);

/// L1 and squared L2 norms of u', using the forward difference on each sample
/// interval (the exact derivative of the piecewise-linear interpolant).
struct GradientNorms {
  double l1 = 0.0;
  double l2sq = 0.0;
};
GradientNorms gradient_norms(const GraphFunction& u);

struct NormReport {
  double mass = 0.0;               // ||u||_2^2
  std::map<double, double> lp;     // p -> ||u||_p^p
  double linf = 0.0;
  double grad_l1 = 0.0;
  double grad_l2sq = 0.0;
};
NormReport norm_report(const GraphFunction& u, std::span<const double> p_list);

/// sqrt(mu / mass(u)) * u.
GraphFunction rescale_mass(const GraphFunction& u, double mu);

/// Rows (edge_id, sample_index, arclength_coordinate, value).
std::string function_csv(const GraphFunction& u);

/// Lumped (trapezoid) quadrature weight of each degree of freedom, so that
/// integrate_power(u, p) == sum_i w_i |u_i|^p.
std::vector<double> lumped_weights(const GraphFunction& u);

/// Degrees of freedom sitting on boundary vertices.
std::vector<char> boundary_mask(const GraphFunction& u);

/// Sets the boundary vertex values to zero (edge interiors are untouched).
void zero_on_boundary(GraphFunction& u);

/// profile(d) with d the graph distance from `center`, measured through the
/// nearer endpoint of each edge; zero on the boundary vertices.
GraphFunction radial_function(const std::shared_ptr<const MetricGraph>& graph, int samples_per_edge, int center,
                              const std::function<double(double)>& profile);

/// Fraction of the mass carried by edges with an endpoint within `radius`
/// (arclength) of the boundary.
double boundary_mass_fraction(const GraphFunction& u, double radius);

}  // namespace hexnls
