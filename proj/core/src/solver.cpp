#include "hexnls/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "discrete.hpp"
#include "hexnls/analytic_forms.hpp"
#include "hexnls/error.hpp"
#include "hexnls/parallel.hpp"
#include "json.hpp"

namespace hexnls {

void SolverConfig::validate() const {
  if (!(step > 0.0)) throw InvalidParameter("solver: step must be positive");
  if (max_iters < 1) throw InvalidParameter("solver: max_iters must be >= 1");
  if (!(energy_tol > 0.0) || !(residual_tol > 0.0)) throw InvalidParameter("solver: tolerances must be positive");
  if (!(spread_threshold > 0.0 && spread_threshold < 1.0))
    throw InvalidParameter("solver: spread_threshold must lie in (0, 1)");
  if (!(boundary_radius > 0.0)) throw InvalidParameter("solver: boundary_radius must be positive");
  if (samples_per_edge < 2) throw InvalidParameter("solver: samples_per_edge must be >= 2");
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::GroundState:
      return "GroundState";
    case Classification::SpreadToZero:
      return "SpreadToZero";
    case Classification::UnboundedBelow:
      return "UnboundedBelow";
    case Classification::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Classification classification_from_string(std::string_view name) {
  for (auto c : {Classification::GroundState, Classification::SpreadToZero, Classification::UnboundedBelow,
                 Classification::Inconclusive}) {
    if (to_string(c) == name) return c;
  }
  throw InvalidParameter("unknown classification '" + std::string(name) + "'");
}

std::string_view to_string(Initializer init) {
  switch (init) {
    case Initializer::soliton_bump:
      return "soliton-bump";
    case Initializer::trial_eps:
      return "trial-eps";
    case Initializer::uniform:
      return "uniform";
    case Initializer::random:
      return "random";
    case Initializer::automatic:
      return "auto";
  }
  return "auto";
}

Initializer initializer_from_string(std::string_view name) {
  for (auto i : {Initializer::soliton_bump, Initializer::trial_eps, Initializer::uniform, Initializer::random,
                 Initializer::automatic}) {
    if (to_string(i) == name) return i;
  }
  throw InvalidParameter("unknown initializer '" + std::string(name) + "'");
}

namespace {

using detail::SparseMatrix;
using detail::Vector;

void check_problem(double p, double mu) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidParameter("minimize: p must lie in (2, 6]");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidParameter("minimize: mu must be positive");
}

// Discrete operators of one layout; energies and residuals in vector form.
struct Discretization {
  explicit Discretization(const GraphFunction& layout)
      : weights(lumped_weights(layout)), fixed(boundary_mask(layout)), stiffness(detail::assemble_stiffness(layout)) {}

  double mass(const Vector& x) const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) m += weights[static_cast<std::size_t>(i)] * x[i] * x[i];
    return m;
  }
  double lp(const Vector& x, double p) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += weights[static_cast<std::size_t>(i)] * std::pow(std::abs(x[i]), p);
    return s;
  }
  double energy(const Vector& x, double p) const { return 0.5 * x.dot(stiffness * x) - lp(x, p) / p; }

  StationarityCheck stationarity(const Vector& x, double p) const {
    const Vector kx = stiffness * x;
    const double mu = mass(x);
    if (!(mu > 0.0)) throw DegenerateInput("euler_lagrange_residual: zero mass");
    const double lambda = (x.dot(kx) - lp(x, p)) / mu;
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (fixed[k]) continue;
      const double g = kx[i] / weights[k] - std::pow(std::abs(x[i]), p - 2.0) * x[i] - lambda * x[i];
      r2 += weights[k] * g * g;
    }
    return {lambda, std::sqrt(r2 / mu)};
  }

  std::vector<double> weights;
  std::vector<char> fixed;
  SparseMatrix stiffness;
};

double energy_scale(const Discretization& d, const Vector& x, double p) {
  return 0.5 * x.dot(d.stiffness * x) + d.lp(x, p) / p;
}

Classification classify(double p, bool converged, double total, double scale, double boundary_fraction,
                        const SolverConfig& cfg) {
  const bool negative = total < -cfg.energy_tol * scale;
  if (p >= 6.0) {
    // No ground states exist at the critical power; negative energy means the
    // squeezing mechanism is available.
    if (negative) return Classification::UnboundedBelow;
    if (converged || boundary_fraction >= cfg.spread_threshold) return Classification::SpreadToZero;
    return Classification::Inconclusive;
  }
  if (converged) return negative ? Classification::GroundState : Classification::SpreadToZero;
  if (!negative && boundary_fraction >= cfg.spread_threshold) return Classification::SpreadToZero;
  return Classification::Inconclusive;
}

// One Newton solve of the stationarity system
//   K u - W |u|^(p-2) u - lambda W u = 0,  u^T W u = mu
// through the bordered form: A da = F, A db = W u with
// A = K - (p-1) W |u|^(p-2) - lambda W on the free degrees of freedom.
bool newton_step(const Discretization& d, Vector& x, double& lambda, double p, double mu) {
  const Eigen::Index n = x.size();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(d.stiffness.nonZeros() + n));
  for (int k = 0; k < d.stiffness.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(d.stiffness, k); it; ++it) {
      if (d.fixed[static_cast<std::size_t>(it.row())] || d.fixed[static_cast<std::size_t>(it.col())]) continue;
      triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  Vector f(n), wu(n);
  const Vector kx = d.stiffness * x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (d.fixed[k]) {
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
      f[i] = 0.0;
      wu[i] = 0.0;
      continue;
    }
    const double w = d.weights[k];
    const double a = std::pow(std::abs(x[i]), p - 2.0);
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), -w * ((p - 1.0) * a + lambda));
    f[i] = kx[i] - w * (a + lambda) * x[i];
    wu[i] = w * x[i];
  }
  SparseMatrix jac(n, n);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(jac);
  if (ldlt.info() != Eigen::Success) return false;
  const Vector a = ldlt.solve(f);
  const Vector b = ldlt.solve(wu);
  const double denom = wu.dot(b);
  if (!a.allFinite() || !b.allFinite() || denom == 0.0) return false;
  const double dlambda = (0.5 * (mu - d.mass(x)) + wu.dot(a)) / denom;
  x += -a + dlambda * b;
  lambda += dlambda;
  const double m = d.mass(x);
  if (!(m > 0.0)) return false;
  x *= std::sqrt(mu / m);
  return x.allFinite();
}

// Preconditioned projected descent: the gradient of E on the mass sphere is
// taken in the inner product of P = K + sigma W (a discrete H^1 metric), with
// Polak-Ribiere momentum, Armijo backtracking and renormalization after every
// step. Near a critical point Newton steps finish the job.
SolveOutcome run_flow(GraphFunction u, double p, double mu, const SolverConfig& cfg, std::string init_name,
                      bool record_trace) {
  const Discretization d(u);
  zero_on_boundary(u);
  if (!(integrate_power(u, 2.0) > 0.0)) throw DegenerateInput("minimize: initial state has zero mass");
  u = rescale_mass(u, mu);

  Vector x = detail::to_vector(u.dofs());
  double e = d.energy(x, p);
  double alpha = cfg.step;
  constexpr int newton_steps = 12;

  std::vector<TraceRow> trace;
  StationarityCheck check = d.stationarity(x, p);
  const auto record = [&] {
    if (!record_trace) return;
    detail::from_vector(x, u.dofs());
    trace.push_back({static_cast<int>(trace.size()) + 1, e, check.residual, alpha,
                     boundary_mass_fraction(u, cfg.boundary_radius)});
  };

  double sigma = 0.0;
  Eigen::SimplicialLDLT<SparseMatrix> precond;
  const auto factor = [&] {
    sigma = std::max(std::abs(check.lambda), 1e-6);
    std::vector<double> shifted(d.weights);
    for (double& w : shifted) w *= sigma;
    precond.compute(detail::assemble_system(u, shifted, 1.0, d.fixed));
    if (precond.info() != Eigen::Success) throw DegenerateInput("minimize: factorization failed");
  };
  factor();

  // W-orthogonal gradient of the energy restricted to the sphere.
  const auto gradient = [&](const Vector& v, double lambda) {
    Vector g = d.stiffness * v;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      g[i] = d.fixed[k] ? 0.0 : g[i] - d.weights[k] * (std::pow(std::abs(v[i]), p - 2.0) + lambda) * v[i];
    }
    return g;
  };
  const auto tangent = [&](const Vector& v, Vector dir) {
    double wvd = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) wvd += d.weights[static_cast<std::size_t>(i)] * v[i] * dir[i];
    dir -= (wvd / mu) * v;
    return dir;
  };

  int it = 0;
  const auto try_newton = [&] {
    Vector y = x;
    double lambda = check.lambda;
    double ey = e;
    bool improved = false;
    for (int k = 0; k < newton_steps; ++k) {
      if (!newton_step(d, y, lambda, p, mu)) break;
      const double en = d.energy(y, p);
      if (!(en <= ey + 1e-13 * std::max(1.0, std::abs(ey)))) break;
      ey = en;
      x = y;
      e = std::min(e, ey);
      check = d.stationarity(y, p);
      ++it;
      improved = true;
      record();
      if (check.residual <= cfg.residual_tol) break;
    }
    return improved;
  };

  Vector dir;
  Vector z_prev;
  Vector g_prev;
  int since_attempt = 0;
  double last_attempt = std::numeric_limits<double>::infinity();
  double lambda_at_factor = check.lambda;
  bool converged = check.residual <= cfg.residual_tol;
  while (!converged && it < cfg.max_iters) {
    // Newton is tried whenever the residual has dropped by a decade since the
    // last attempt, and every 50 steps otherwise.
    if (check.residual < 0.1 * last_attempt || ++since_attempt >= 50) {
      last_attempt = check.residual;
      since_attempt = 0;
      if (try_newton()) {
        converged = check.residual <= cfg.residual_tol;
        if (converged) break;
        dir.resize(0);
      }
    }
    if (std::abs(check.lambda - lambda_at_factor) > 0.5 * std::abs(lambda_at_factor)) {
      factor();
      lambda_at_factor = check.lambda;
      dir.resize(0);
    }
    const Vector g = gradient(x, check.lambda);
    const Vector z = precond.solve(g);
    Vector step = -z;
    if (dir.size() == x.size()) {
      const double beta = std::max(0.0, (g.dot(z) - g_prev.dot(z)) / g_prev.dot(z_prev));
      step += beta * tangent(x, dir);
    }
    double slope = g.dot(step);
    if (!(slope < 0.0)) {
      step = -z;
      slope = -g.dot(z);
    }
    if (!(slope < 0.0)) break;  // zero gradient in the preconditioned metric
    bool accepted = false;
    for (int trial = 0; trial < 60; ++trial) {
      Vector y = x + alpha * step;
      const double m = d.mass(y);
      if (m > 0.0 && y.allFinite()) {
        y *= std::sqrt(mu / m);
        const double ey = d.energy(y, p);
        if (ey <= e + 1e-4 * alpha * slope) {
          x = std::move(y);
          e = ey;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no descent left at this resolution
    ++it;
    dir = step;
    g_prev = g;
    z_prev = z;
    check = d.stationarity(x, p);
    converged = check.residual <= cfg.residual_tol;
    record();
    alpha = std::min(alpha * 2.0, 1e3);
  }
  if (!converged && try_newton()) converged = check.residual <= cfg.residual_tol;

  detail::from_vector(x, u.dofs());
  const double bfrac = boundary_mass_fraction(u, cfg.boundary_radius);
  const double scale = energy_scale(d, x, p);
  SolveOutcome out{classify(p, converged, e, scale, bfrac, cfg),
                   energy(u, p),
                   u,
                   check.lambda,
                   check.residual,
                   it,
                   converged,
                   bfrac,
                   std::move(init_name),
                   std::move(trace)};
  return out;
}

// A path of vertices with signed arclength coordinates, zero at the origin.
struct PathPlacement {
  std::vector<double> coordinate;  // per vertex, NaN off the path
  std::vector<char> on_path;       // per edge
};

PathPlacement place_path(const MetricGraph& g, const std::vector<int>& vertices, std::size_t origin) {
  PathPlacement pl;
  pl.coordinate.assign(static_cast<std::size_t>(g.num_vertices()), std::numeric_limits<double>::quiet_NaN());
  pl.on_path.assign(static_cast<std::size_t>(g.num_edges()), 0);
  std::vector<double> s(vertices.size(), 0.0);
  for (std::size_t k = 1; k < vertices.size(); ++k) {
    int edge = -1;
    for (const Incidence& in : g.incidences(vertices[k - 1])) {
      if (g.other_end(in.edge, vertices[k - 1]) == vertices[k] && (edge < 0 || in.edge < edge)) edge = in.edge;
    }
    if (edge < 0) throw DegenerateInput("path vertices are not adjacent");
    pl.on_path[static_cast<std::size_t>(edge)] = 1;
    s[k] = s[k - 1] + g.edge(edge).length;
  }
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    pl.coordinate[static_cast<std::size_t>(vertices[k])] = s[k] - s[origin];
  }
  return pl;
}

// profile(s) along the path; every other edge carries a smooth cos^2 tail
// from its endpoints on the path down to zero. Zero on the boundary.
GraphFunction path_profile(const std::shared_ptr<const MetricGraph>& graph, int n, const PathPlacement& pl,
                           const std::function<double(double)>& profile) {
  const MetricGraph& g = *graph;
  const auto at_vertex = [&](int v) {
    const double c = pl.coordinate[static_cast<std::size_t>(v)];
    return std::isnan(c) ? 0.0 : profile(c);
  };
  GraphFunction u = GraphFunction::from_callables(graph, n, at_vertex, [&](int e, double x) {
    const Edge& edge = g.edge(e);
    if (pl.on_path[static_cast<std::size_t>(e)]) {
      const double c0 = pl.coordinate[static_cast<std::size_t>(edge.tail)];
      const double c1 = pl.coordinate[static_cast<std::size_t>(edge.head)];
      return profile(c1 > c0 ? c0 + x : c0 - x);
    }
    const double t = x / edge.length;
    const double from_tail = at_vertex(edge.tail) * std::pow(std::cos(0.5 * std::numbers::pi * t), 2);
    const double from_head = at_vertex(edge.head) * std::pow(std::cos(0.5 * std::numbers::pi * (1.0 - t)), 2);
    return from_tail + from_head;
  });
  zero_on_boundary(u);
  return u;
}

// Geodesic through `center` between two boundary vertices: first to the
// nearest boundary vertex a, then on to the boundary vertex b for which the
// center lies (as nearly as possible) on a geodesic from a to b.
PathPlacement path_through(const MetricGraph& g, int center) {
  const int c_src[] = {center};
  const auto dc = vertex_distances(g, c_src);
  int a = -1;
  for (const Vertex& v : g.vertices()) {
    if (v.boundary && (a < 0 || dc[static_cast<std::size_t>(v.id)] < dc[static_cast<std::size_t>(a)] - 1e-12)) a = v.id;
  }
  if (a < 0) {
    return place_path(g, {center}, 0);
  }
  const int a_src[] = {a};
  const auto da = vertex_distances(g, a_src);
  int b = -1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const Vertex& v : g.vertices()) {
    if (!v.boundary || v.id == a) continue;
    const auto k = static_cast<std::size_t>(v.id);
    const double gap = dc[k] + dc[static_cast<std::size_t>(a)] - da[k];  // >= 0, zero on a geodesic through center
    const bool better = gap < best_gap - 1e-9 ||
                        (gap <= best_gap + 1e-9 && b >= 0 && dc[k] < dc[static_cast<std::size_t>(b)] - 1e-12);
    if (b < 0 || better) {
      b = v.id;
      best_gap = std::min(best_gap, gap);
    }
  }
  std::vector<int> vertices = shortest_path(g, a, center);
  if (b >= 0) {
    const std::vector<int> second = shortest_path(g, center, b);
    vertices.insert(vertices.end(), second.begin() + 1, second.end());
  }
  const std::size_t origin = static_cast<std::size_t>(std::find(vertices.begin(), vertices.end(), center) - vertices.begin());
  return place_path(g, vertices, origin);
}

}  // namespace

GraphFunction initial_state(const std::shared_ptr<const MetricGraph>& graph, double p, double mu,
                            const SolverConfig& cfg, Initializer init) {
  check_problem(p, mu);
  const MetricGraph& g = *graph;
  const int center = central_vertex(g);
  const int n = cfg.samples_per_edge;
  GraphFunction u(graph, n);
  switch (init) {
    case Initializer::soliton_bump: {
      const PathPlacement pl = path_through(g, center);
      if (p < 6.0) {
        const SolitonParams s = make_soliton(p, mu);
        u = path_profile(graph, n, pl, [&s](double r) { return soliton_profile(s, r); });
      } else {
        u = path_profile(graph, n, pl, [](double r) { return std::sqrt(1.0 / std::cosh(r)); });
      }
      break;
    }
    case Initializer::trial_eps:
      u = radial_function(graph, n, center, [](double r) { return std::exp(-0.3 * r); });
      break;
    case Initializer::uniform: {
      std::vector<double> ones(static_cast<std::size_t>(g.num_vertices()), 1.0);
      u = GraphFunction::from_vertex_values(graph, n, ones);
      zero_on_boundary(u);
      // Re-interpolate so the edges next to the boundary ramp linearly.
      std::vector<double> values(ones.size());
      for (int v = 0; v < g.num_vertices(); ++v) values[static_cast<std::size_t>(v)] = u.vertex_value(v);
      u = GraphFunction::from_vertex_values(graph, n, values);
      break;
    }
    case Initializer::random: {
      Rng rng = make_rng(cfg.seed, 0);
      u = random_envelope_function(graph, n, 0.2, center, rng);
      break;
    }
    case Initializer::automatic:
      throw InvalidParameter("initial_state: 'auto' is not a single initial state");
  }
  if (!(integrate_power(u, 2.0) > 0.0)) throw DegenerateInput("initial_state: graph has no interior");
  return rescale_mass(u, mu);
}

SolveOutcome minimize(const std::shared_ptr<const MetricGraph>& graph, double p, double mu, const SolverConfig& cfg,
                      const GraphFunction& init, bool record_trace) {
  check_problem(p, mu);
  cfg.validate();
  if (&init.graph() != graph.get()) throw InvalidParameter("minimize: initial state lives on another graph");
  return run_flow(init, p, mu, cfg, "custom", record_trace);
}

SolveOutcome minimize(const std::shared_ptr<const MetricGraph>& graph, double p, double mu, const SolverConfig& cfg,
                      Initializer init, bool record_trace) {
  check_problem(p, mu);
  cfg.validate();
  if (init != Initializer::automatic) {
    return run_flow(initial_state(graph, p, mu, cfg, init), p, mu, cfg, std::string(to_string(init)), record_trace);
  }
  static constexpr Initializer starts[] = {Initializer::soliton_bump, Initializer::trial_eps, Initializer::uniform};
  std::vector<std::optional<SolveOutcome>> results(std::size(starts));
  parallel_for(std::size(starts), [&](std::size_t i) {
    results[i] = run_flow(initial_state(graph, p, mu, cfg, starts[i]), p, mu, cfg, std::string(to_string(starts[i])),
                          record_trace);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i]->final_energy.total < results[best]->final_energy.total) best = i;
  }
  return std::move(*results[best]);
}

StationarityCheck euler_lagrange_residual(const GraphFunction& u, double p) {
  if (!(p >= 2.0)) throw InvalidParameter("euler_lagrange_residual: p must be >= 2");
  const Discretization d(u);
  return d.stationarity(detail::to_vector(u.dofs()), p);
}

CriticalMass bisect_critical_mass(const std::shared_ptr<const MetricGraph>& graph, double p, double mu_lo,
                                  double mu_hi, const SolverConfig& cfg, double rel_tol) {
  if (!(p >= 4.0 && p < 6.0)) throw InvalidParameter("bisect_critical_mass: p must lie in [4, 6)");
  if (!(mu_lo > 0.0 && mu_hi > mu_lo)) throw InvalidParameter("bisect_critical_mass: need 0 < mu_lo < mu_hi");
  if (!(rel_tol > 0.0)) throw InvalidParameter("bisect_critical_mass: tolerance must be positive");
  CriticalMass out;
  std::optional<GraphFunction> seed_state;
  std::optional<GraphFunction> upper;
  double upper_mu = std::numeric_limits<double>::infinity();
  const auto ground = [&](double mu) {
    SolveOutcome best = minimize(graph, p, mu, cfg, Initializer::automatic);
    if (seed_state) {
      SolveOutcome warm = minimize(graph, p, mu, cfg, rescale_mass(*seed_state, mu));
      if (warm.final_energy.total < best.final_energy.total) best = std::move(warm);
    }
    const bool is_ground = best.classification == Classification::GroundState;
    if (is_ground) {
      seed_state = best.state;
      if (mu <= upper_mu) {
        upper_mu = mu;
        upper = best.state;
      }
    }
    out.samples.emplace_back(mu, best.classification);
    return is_ground;
  };
  const bool hi_ground = ground(mu_hi);
  if (ground(mu_lo) || !hi_ground) {
    throw BracketError("bisect_critical_mass: [" + std::to_string(mu_lo) + ", " + std::to_string(mu_hi) +
                       "] does not straddle the transition");
  }
  double lo = mu_lo;
  double hi = mu_hi;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (ground(mid) ? hi : lo) = mid;
  }
  // The predicate must be monotone over everything sampled.
  for (const auto& [mu_a, c_a] : out.samples) {
    for (const auto& [mu_b, c_b] : out.samples) {
      if (c_a == Classification::GroundState && c_b != Classification::GroundState && mu_b > mu_a) {
        throw BracketError("bisect_critical_mass: classification is not monotone in mu");
      }
    }
  }
  out.bracket = {lo, hi};
  out.mu_star = 0.5 * (lo + hi);
  out.upper_state = upper;
  return out;
}

namespace {

PathPlacement place_l0(const HoneycombLattice& lat) {
  const MetricGraph& g = *lat.graph;
  const PathFamily paths = decompose_paths(lat);
  const auto it = paths.l_paths.find(0);
  if (it == paths.l_paths.end() || it->second.empty()) throw DegenerateInput("demonstrate_unbounded: no path L_0");
  // L-path edges run left to right with the tail on the left.
  std::vector<int> vertices{g.edge(it->second.front()).tail};
  for (int e : it->second) vertices.push_back(g.edge(e).head);
  const auto origin = std::find(vertices.begin(), vertices.end(), lat.origin_vertex);
  if (origin == vertices.end()) throw DegenerateInput("demonstrate_unbounded: origin is not on L_0");
  return place_path(g, vertices, static_cast<std::size_t>(origin - vertices.begin()));
}

GraphFunction squeezed_profile(const HoneycombLattice& lat, const PathPlacement& pl, double width, int n, double mu) {
  return rescale_mass(
      path_profile(lat.graph, n, pl, [width](double s) { return std::sqrt(1.0 / std::cosh(s / width)); }), mu);
}

}  // namespace

std::vector<UnboundedProbe> demonstrate_unbounded(const HoneycombLattice& lat, double mu,
                                                  const std::vector<double>& widths, const UnboundedOptions& options) {
  if (!(mu > 0.0)) throw InvalidParameter("demonstrate_unbounded: mu must be positive");
  if (widths.empty()) throw InvalidParameter("demonstrate_unbounded: no widths");
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (!(widths[i] > 0.0)) throw InvalidParameter("demonstrate_unbounded: widths must be positive");
    if (i > 0 && !(widths[i] < widths[i - 1])) throw InvalidParameter("demonstrate_unbounded: widths must decrease");
  }
  const PathPlacement pl = place_l0(lat);
  const double l = lat.edge_length;
  std::vector<UnboundedProbe> out;
  for (double w : widths) {
    const double needed = std::ceil(options.samples_per_width * l / w) + 1.0;
    const int n = static_cast<int>(std::max<double>(options.base_samples, needed));
    if (needed > options.max_samples || 2 * n - 1 > options.max_samples) {
      throw ResolutionError("demonstrate_unbounded: width " + std::to_string(w) + " needs more than " +
                            std::to_string(options.max_samples) + " samples per edge");
    }
    UnboundedProbe probe;
    probe.width = w;
    probe.samples_per_edge = n;
    probe.energy = energy(squeezed_profile(lat, pl, w, n, mu), 6.0);
    const double refined = energy(squeezed_profile(lat, pl, w, 2 * n - 1, mu), 6.0).total;
    // Relative to the size of the two terms: the total itself may sit near zero.
    const double scale = probe.energy.kinetic + probe.energy.potential;
    probe.refinement_change = std::abs(refined - probe.energy.total) / std::max(scale, 1e-300);
    if (probe.refinement_change > options.gate_tolerance) {
      throw ResolutionError("demonstrate_unbounded: energy at width " + std::to_string(w) +
                            " is not converged under sample doubling");
    }
    out.push_back(probe);
  }
  return out;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,energy,residual,step,boundary_mass_fraction\n";
  for (const TraceRow& r : trace) {
    out << r.iteration << ',' << r.energy << ',' << r.residual << ',' << r.step << ',' << r.boundary_mass_fraction
        << '\n';
  }
  return out.str();
}

std::string outcome_json(const SolveOutcome& outcome, double p, double mu, const SolverConfig& cfg, int indent) {
  nlohmann::ordered_json doc;
  doc["classification"] = std::string(to_string(outcome.classification));
  doc["p"] = p;
  doc["mu"] = mu;
  doc["energy"] = {{"kinetic", outcome.final_energy.kinetic},
                   {"potential", outcome.final_energy.potential},
                   {"total", outcome.final_energy.total},
                   {"mass", outcome.final_energy.mass}};
  doc["lagrange_multiplier"] = outcome.lagrange_multiplier;
  doc["residual"] = outcome.residual;
  doc["iterations"] = outcome.iterations;
  doc["converged"] = outcome.converged;
  doc["boundary_mass_fraction"] = outcome.boundary_mass_fraction;
  doc["initializer"] = outcome.initializer;
  doc["config"] = {{"step", cfg.step},
                   {"max_iters", cfg.max_iters},
                   {"energy_tol", cfg.energy_tol},
                   {"residual_tol", cfg.residual_tol},
                   {"spread_threshold", cfg.spread_threshold},
                   {"boundary_radius", cfg.boundary_radius},
                   {"samples_per_edge", cfg.samples_per_edge}};
  doc["seed"] = cfg.seed;
  return doc.dump(indent);
}

}  // namespace hexnls
