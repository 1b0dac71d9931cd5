#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hexnls/analytic_forms.hpp"
#include "hexnls/error.hpp"
#include "hexnls/graph_function.hpp"
#include "hexnls/honeycomb.hpp"

using namespace hexnls;

namespace {

std::shared_ptr<const MetricGraph> single_edge() {
  std::vector<Vertex> vs{{0, {0, 0}, true}, {1, {1, 0}, true}};
  std::vector<Edge> es{{0, 0, 1, 1.0, EdgeKind::horizontal}};
  return std::make_shared<const MetricGraph>(MetricGraph::from_parts(vs, es));
}

GraphFunction constant(const std::shared_ptr<const MetricGraph>& g, double c, int n = 9) {
  return GraphFunction::from_callables(
      g, n, [c](int) { return c; }, [c](int, double) { return c; });
}

}  // namespace

TEST(IntegratePower, ConstantFunction) {
  auto g = std::make_shared<const MetricGraph>(build_star(3, 2.5));
  const GraphFunction u = constant(g, 1.7);
  EXPECT_NEAR(integrate_power(u, 2.0), 1.7 * 1.7 * 7.5, 1e-12);
  EXPECT_NEAR(integrate_power(u, 2.0, Quadrature::simpson), 1.7 * 1.7 * 7.5, 1e-12);
}

TEST(IntegratePower, HatOnUnitEdge) {
  const auto g = single_edge();
  const double peak = 2.0;
  const GraphFunction u = GraphFunction::from_callables(
      g, 65, [](int) { return 0.0; }, [peak](int, double x) { return peak * (1.0 - std::abs(2.0 * x - 1.0)); });
  // The hat is linear on each half, so the trapezoid rule is exact up to the
  // quadratic error of u^2; Simpson integrates the square exactly.
  EXPECT_NEAR(integrate_power(u, 2.0, Quadrature::simpson), peak * peak / 3.0, 1e-12);
  EXPECT_NEAR(integrate_power(u, 2.0), peak * peak / 3.0, 1e-3);
}

TEST(IntegratePower, TrialFunctionMatchesClosedForm) {
  const double eps = 0.1;
  const HoneycombLattice lat = build_honeycomb(trial_truncation_radius(eps), 1.0);
  const GraphFunction u = trial_function(lat, eps);
  const double exact = 3.0 * (std::exp(0.2) + 1.0) / (0.2 * (std::exp(0.2) - 1.0));
  EXPECT_NEAR(exact, 150.50, 5e-3);
  EXPECT_LT(std::abs(integrate_power(u, 2.0) - exact) / exact, 1e-3);
}

TEST(IntegratePower, RejectsBadArguments) {
  const GraphFunction u = constant(single_edge(), 1.0, 4);
  EXPECT_THROW(integrate_power(u, 0.5), InvalidParameter);
  EXPECT_THROW(integrate_power(u, 2.0, Quadrature::simpson), InvalidParameter);
}

TEST(GradientNorms, Constant) {
  const auto g = std::make_shared<const MetricGraph>(build_line(3.0));
  const GradientNorms n = gradient_norms(constant(g, 4.0));
  EXPECT_EQ(n.l1, 0.0);
  EXPECT_EQ(n.l2sq, 0.0);
}

TEST(GradientNorms, LinearRamp) {
  const double values[] = {0.0, 1.0};
  const GradientNorms n = gradient_norms(GraphFunction::from_vertex_values(single_edge(), 17, values));
  EXPECT_NEAR(n.l1, 1.0, 1e-14);
  EXPECT_NEAR(n.l2sq, 1.0, 1e-14);
}

TEST(GradientNorms, TrialFunctionMatchesClosedForm) {
  const double eps = 0.1;
  const HoneycombLattice lat = build_honeycomb(trial_truncation_radius(eps), 1.0);
  const GraphFunction u = trial_function(lat, eps);
  const double exact = 3.0 * eps * (std::exp(2 * eps) + 1.0) / (2.0 * (std::exp(2 * eps) - 1.0));
  EXPECT_NEAR(exact, 1.5050, 5e-4);
  const double k = gradient_norms(u).l2sq;
  EXPECT_LT(std::abs(k - exact) / exact, 1e-3);
  // |u'| = eps u pointwise.
  EXPECT_LT(std::abs(k - eps * eps * integrate_power(u, 2.0)) / k, 1e-3);
}

TEST(NormReport, ConstantOne) {
  auto g = std::make_shared<const MetricGraph>(build_star(4, 1.5));
  const double ps[] = {3.0};
  const NormReport r = norm_report(constant(g, 1.0), ps);
  EXPECT_NEAR(r.mass, 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.linf, 1.0);
  EXPECT_NEAR(r.lp.at(3.0), 6.0, 1e-12);
}

TEST(NormReport, Homogeneity) {
  const HoneycombLattice lat = build_honeycomb(3, 1.0);
  const GraphFunction u = trial_function(lat, 0.3, 9);
  const double ps[] = {3.0, 4.5};
  const NormReport a = norm_report(u, ps);
  for (double c : {0.5, -2.0, 10.0}) {
    const NormReport b = norm_report(u.scaled(c), ps);
    EXPECT_NEAR(b.mass, c * c * a.mass, 1e-12 * b.mass);
    for (double p : ps) EXPECT_NEAR(b.lp.at(p), std::pow(std::abs(c), p) * a.lp.at(p), 1e-12 * b.lp.at(p));
    EXPECT_NEAR(b.grad_l2sq, c * c * a.grad_l2sq, 1e-12 * b.grad_l2sq);
  }
}

TEST(NormReport, TrialFunctionConsistency) {
  const double eps = 0.2;
  const HoneycombLattice lat = build_honeycomb(trial_truncation_radius(eps), 1.0);
  const double ps[] = {2.0, 4.0};
  const NormReport r = norm_report(trial_function(lat, eps), ps);
  EXPECT_LT(std::abs(r.mass - trial_lp_integral(eps, 2.0)) / r.mass, 1e-3);
  EXPECT_LT(std::abs(r.lp.at(4.0) - trial_lp_integral(eps, 4.0)) / r.lp.at(4.0), 1e-3);
  EXPECT_LT(std::abs(r.grad_l2sq - trial_kinetic_integral(eps)) / r.grad_l2sq, 1e-3);
  EXPECT_NEAR(r.linf, 1.0, 1e-14);
}

TEST(RescaleMass, Factor) {
  auto g = std::make_shared<const MetricGraph>(build_line(2.0));  // length 4
  const GraphFunction u = constant(g, 1.0);
  const GraphFunction v = rescale_mass(u, 1.0);
  EXPECT_NEAR(v.vertex_value(0), 0.5, 1e-15);
  EXPECT_NEAR(integrate_power(v, 2.0), 1.0, 1e-14);
}

TEST(RescaleMass, IdentityAtOwnMass) {
  const HoneycombLattice lat = build_honeycomb(2, 1.0);
  const GraphFunction u = trial_function(lat, 0.5, 5);
  const GraphFunction v = rescale_mass(u, integrate_power(u, 2.0));
  for (int i = 0; i < u.num_dofs(); ++i) EXPECT_NEAR(v.dofs()[i], u.dofs()[i], 1e-15);
}

TEST(RescaleMass, ReproducesNormalizationConstant) {
  const double eps = 0.1;
  const HoneycombLattice lat = build_honeycomb(trial_truncation_radius(eps), 1.0);
  const GraphFunction v = rescale_mass(trial_function(lat, eps), 1.0);
  // u_eps is 1 at the origin, so the value there is the scale factor.
  EXPECT_NEAR(v.vertex_value(lat.origin_vertex), 0.08151, 1e-4);
  EXPECT_LT(std::abs(v.vertex_value(lat.origin_vertex) - trial_normalization(eps, 1.0)) / 0.08151, 1e-3);
}

TEST(RescaleMass, ZeroFunctionIsDegenerate) {
  auto g = std::make_shared<const MetricGraph>(build_line(2.0));
  EXPECT_THROW(rescale_mass(constant(g, 0.0), 1.0), DegenerateInput);
  EXPECT_THROW(rescale_mass(constant(g, 1.0), -1.0), InvalidParameter);
}

TEST(GraphFunction, VertexContinuityAndLayout) {
  auto g = std::make_shared<const MetricGraph>(build_line(2.0));
  GraphFunction u(g, 5);
  EXPECT_EQ(u.num_dofs(), g->num_vertices() + g->num_edges() * 3);
  u.set_vertex_value(1, 3.0);
  for (const Edge& e : g->edges()) {
    if (e.tail == 1) EXPECT_EQ(u.sample(e.id, 0), 3.0);
    if (e.head == 1) EXPECT_EQ(u.sample(e.id, 4), 3.0);
  }
  EXPECT_THROW(u.set_interior(0, 0, 1.0), InvalidParameter);
}

TEST(GraphFunction, LumpedWeightsReproduceQuadrature) {
  const HoneycombLattice lat = build_honeycomb(2, 1.0);
  const GraphFunction u = trial_function(lat, 0.4, 7);
  const auto w = lumped_weights(u);
  double s = 0.0;
  for (int i = 0; i < u.num_dofs(); ++i) s += w[i] * std::pow(std::abs(u.dofs()[i]), 3.0);
  EXPECT_NEAR(s, integrate_power(u, 3.0), 1e-12 * s);
}

TEST(GraphFunction, BoundaryHelpers) {
  const HoneycombLattice lat = build_honeycomb(2, 1.0);
  GraphFunction u = trial_function(lat, 0.4, 5);
  zero_on_boundary(u);
  const auto mask = boundary_mask(u);
  for (int i = 0; i < u.num_dofs(); ++i) {
    if (mask[i]) EXPECT_EQ(u.dofs()[i], 0.0);
  }
  EXPECT_GT(boundary_mass_fraction(u, 1.0), 0.0);
  EXPECT_LE(boundary_mass_fraction(u, 1.0), 1.0);
}

TEST(GraphFunction, CsvHasOneRowPerSample) {
  auto g = std::make_shared<const MetricGraph>(build_line(1.0));
  const std::string csv = function_csv(constant(g, 1.0, 4));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 4);
}
