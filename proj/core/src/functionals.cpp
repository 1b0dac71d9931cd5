#include "hexnls/functionals.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "discrete.hpp"
#include "hexnls/error.hpp"

namespace hexnls {

EnergyReport energy(const GraphFunction& u, double p) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidParameter("energy: p must lie in (2, 6]");
  EnergyReport r;
  r.p = p;
  r.mass = integrate_power(u, 2.0);
  r.kinetic = 0.5 * gradient_norms(u).l2sq;
  r.potential = integrate_power(u, p) / p;
  r.total = r.kinetic - r.potential;
  return r;
}

std::string_view to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::sobolev2d:
      return "sobolev2d";
    case InequalityKind::sobolev1d:
      return "sobolev1d";
    case InequalityKind::gn1d:
      return "gn1d";
    case InequalityKind::gn2d:
      return "gn2d";
    case InequalityKind::gn_interp:
      return "gn_interp";
  }
  return "sobolev2d";
}

InequalityKind inequality_from_string(std::string_view name) {
  for (auto k : {InequalityKind::sobolev2d, InequalityKind::sobolev1d, InequalityKind::gn1d, InequalityKind::gn2d,
                 InequalityKind::gn_interp}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidParameter("unknown inequality '" + std::string(name) + "'");
}

namespace {

// Exponents of log ratio = a*log P + b*log M + c*log K + d*log G1 + e*log Linf,
// where P = ||u||_p^p, M = ||u||_2^2, K = ||u'||_2^2, G1 = ||u'||_1.
struct RatioExponents {
  double lp = 0, mass = 0, kinetic = 0, grad_l1 = 0, linf = 0;
};

RatioExponents exponents(InequalityKind kind, double p) {
  switch (kind) {
    case InequalityKind::sobolev2d:
      return {0.0, 0.5, 0.0, -1.0, 0.0};
    case InequalityKind::sobolev1d:
      return {0.0, 0.0, 0.0, -1.0, 1.0};
    case InequalityKind::gn1d:
      return {1.0, -(0.5 * p + 1.0) / 2.0, -(0.5 * p - 1.0) / 2.0, 0.0, 0.0};
    case InequalityKind::gn2d:
      return {1.0, -1.0, -(p - 2.0) / 2.0, 0.0, 0.0};
    case InequalityKind::gn_interp:
      return {1.0, -(p - 2.0) / 2.0, -1.0, 0.0, 0.0};
  }
  return {};
}

bool uses_p(InequalityKind kind) {
  return kind == InequalityKind::gn1d || kind == InequalityKind::gn2d || kind == InequalityKind::gn_interp;
}

void check_p(InequalityKind kind, double p) {
  if (uses_p(kind) && !(p >= 2.0)) throw InvalidParameter("inequality_ratio: p must be >= 2");
}

FunctionSummary summarize(const GraphFunction& u, double p) {
  FunctionSummary s;
  s.mass = integrate_power(u, 2.0);
  s.lp = integrate_power(u, p);
  const auto grad = gradient_norms(u);
  s.grad_l1 = grad.l1;
  s.grad_l2sq = grad.l2sq;
  const auto dofs = u.dofs();
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    if (std::abs(dofs[i]) > s.linf) {
      s.linf = std::abs(dofs[i]);
      s.argmax_dof = static_cast<int>(i);
    }
  }
  return s;
}

double log_ratio(const FunctionSummary& s, const RatioExponents& ex) {
  double r = 0.0;
  const auto term = [&r](double coeff, double value) {
    if (coeff == 0.0) return;
    if (!(value > 0.0)) {
      r = coeff < 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      return;
    }
    if (std::isfinite(r)) r += coeff * std::log(value);
  };
  term(ex.lp, s.lp);
  term(ex.mass, s.mass);
  term(ex.kinetic, s.grad_l2sq);
  term(ex.grad_l1, s.grad_l1);
  term(ex.linf, s.linf);
  return r;
}

}  // namespace

InequalityRatio inequality_ratio(const GraphFunction& u, InequalityKind name, double p) {
  check_p(name, p);
  const double pp = uses_p(name) ? p : 2.0;
  InequalityRatio out;
  out.name = name;
  out.p = p;
  out.witness = summarize(u, pp);
  const auto ex = exponents(name, pp);
  const bool zero_denominator = (ex.mass < 0 && !(out.witness.mass > 0)) ||
                                (ex.kinetic < 0 && !(out.witness.grad_l2sq > 0)) ||
                                (ex.grad_l1 < 0 && !(out.witness.grad_l1 > 0));
  if (zero_denominator) throw DegenerateInput("inequality_ratio: zero denominator");
  const auto& w = out.witness;
  switch (name) {
    case InequalityKind::sobolev2d:
      out.value = std::sqrt(w.mass) / w.grad_l1;
      break;
    case InequalityKind::sobolev1d:
      out.value = w.linf / w.grad_l1;
      break;
    case InequalityKind::gn1d:
      out.value = w.lp / (std::pow(w.mass, (0.5 * p + 1.0) / 2.0) * std::pow(w.grad_l2sq, (0.5 * p - 1.0) / 2.0));
      break;
    case InequalityKind::gn2d:
      out.value = w.lp / (w.mass * std::pow(w.grad_l2sq, (p - 2.0) / 2.0));
      break;
    case InequalityKind::gn_interp:
      out.value = w.lp / (w.grad_l2sq * std::pow(w.mass, (p - 2.0) / 2.0));
      break;
  }
  return out;
}

GraphFunction random_envelope_function(const std::shared_ptr<const MetricGraph>& graph, int samples_per_edge,
                                       double gamma, int center, Rng& rng) {
  const MetricGraph& g = *graph;
  const int sources[] = {center};
  const auto dist = vertex_distances(g, sources);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(g.num_vertices()));
  for (int v = 0; v < g.num_vertices(); ++v) {
    const double draw = uniform(rng);
    values[static_cast<std::size_t>(v)] =
        g.vertex(v).boundary ? 0.0 : draw * std::exp(-gamma * dist[static_cast<std::size_t>(v)]);
  }
  return GraphFunction::from_vertex_values(graph, samples_per_edge, values);
}

GraphFunction corpus_function(const std::shared_ptr<const MetricGraph>& graph, int index, std::uint64_t seed,
                              int samples_per_edge) {
  static constexpr double gammas[] = {0.05, 0.2, 1.0};
  if (index < 0) throw InvalidParameter("corpus_function: index must be >= 0");
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(index));
  return random_envelope_function(graph, samples_per_edge, gammas[index % 3], central_vertex(*graph), rng);
}

std::vector<GraphFunction> random_corpus(const std::shared_ptr<const MetricGraph>& graph, int count,
                                         std::uint64_t seed, int samples_per_edge) {
  std::vector<GraphFunction> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) out.push_back(corpus_function(graph, i, seed, samples_per_edge));
  return out;
}

namespace {

using detail::Vector;

// Evaluates the log-ratio and its (sub)gradient with respect to the free
// degrees of freedom.
class RatioObjective {
 public:
  RatioObjective(const GraphFunction& layout, InequalityKind kind, double p)
      : layout_(layout),
        ex_(exponents(kind, p)),
        p_(p),
        weights_(lumped_weights(layout)),
        fixed_(boundary_mask(layout)),
        stiffness_(detail::assemble_stiffness(layout)) {}

  const std::vector<char>& fixed() const { return fixed_; }
  const std::vector<double>& weights() const { return weights_; }

  double value(const GraphFunction& u) const { return log_ratio(summarize(u, p_), ex_); }

  Vector gradient(const GraphFunction& u) const {
    const FunctionSummary s = summarize(u, p_);
    const Vector x = detail::to_vector(u.dofs());
    Vector g = Vector::Zero(x.size());
    if (ex_.mass != 0.0) {
      for (Eigen::Index i = 0; i < x.size(); ++i) g[i] += ex_.mass * 2.0 * weights_[static_cast<std::size_t>(i)] * x[i] / s.mass;
    }
    if (ex_.lp != 0.0) {
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double a = std::abs(x[i]);
        g[i] += ex_.lp * p_ * weights_[static_cast<std::size_t>(i)] * std::pow(a, p_ - 2.0) * x[i] / s.lp;
      }
    }
    if (ex_.kinetic != 0.0) g += ex_.kinetic * 2.0 * (stiffness_ * x) / s.grad_l2sq;
    if (ex_.grad_l1 != 0.0) {
      const MetricGraph& graph = layout_.graph();
      const int n = layout_.samples_per_edge();
      for (const Edge& e : graph.edges()) {
        for (int k = 0; k + 1 < n; ++k) {
          const int a = layout_.dof_index(e.id, k);
          const int b = layout_.dof_index(e.id, k + 1);
          const double d = x[b] - x[a];
          const double sgn = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
          g[b] += ex_.grad_l1 * sgn / s.grad_l1;
          g[a] -= ex_.grad_l1 * sgn / s.grad_l1;
        }
      }
    }
    if (ex_.linf != 0.0 && s.argmax_dof >= 0) g[s.argmax_dof] += ex_.linf / x[s.argmax_dof];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (fixed_[static_cast<std::size_t>(i)]) g[i] = 0.0;
    }
    return g;
  }

 private:
  const GraphFunction& layout_;
  RatioExponents ex_;
  double p_;
  std::vector<double> weights_;
  std::vector<char> fixed_;
  detail::SparseMatrix stiffness_;
};

std::vector<GraphFunction> ascent_starts(const std::shared_ptr<const MetricGraph>& graph, int n, int count,
                                         std::uint64_t seed) {
  const MetricGraph& g = *graph;
  std::vector<int> interior;
  for (const Vertex& v : g.vertices()) {
    if (!v.boundary) interior.push_back(v.id);
  }
  if (interior.empty()) throw DegenerateInput("estimate_sharp_constant: graph has no interior vertex");
  const int center = central_vertex(g);
  static constexpr double decay_rates[] = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 4.0};
  static constexpr double widths[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  static constexpr double gammas[] = {0.05, 0.2, 1.0};
  std::vector<GraphFunction> out;
  for (int s = 0; s < count; ++s) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(s));
    int where = center;
    if (s >= 3) {
      std::uniform_int_distribution<std::size_t> pick(0, interior.size() - 1);
      where = interior[pick(rng)];
    }
    switch (s % 3) {
      case 0:
        out.push_back(random_envelope_function(graph, n, gammas[(s / 3) % 3], where, rng));
        break;
      case 1: {
        const double rate = decay_rates[(s / 3) % std::size(decay_rates)];
        out.push_back(radial_function(graph, n, where, [rate](double d) { return std::exp(-rate * d); }));
        break;
      }
      default: {
        const double w = widths[(s / 3) % std::size(widths)];
        out.push_back(radial_function(graph, n, where, [w](double d) { return 1.0 / std::cosh(d / w); }));
        break;
      }
    }
  }
  return out;
}

}  // namespace

SharpConstantEstimate estimate_sharp_constant(InequalityKind name, double p,
                                              const std::shared_ptr<const MetricGraph>& graph, int budget,
                                              std::uint64_t seed, const AscentOptions& options,
                                              std::span<const GraphFunction> extra_starts) {
  if (budget < 1) throw InvalidParameter("estimate_sharp_constant: budget must be >= 1");
  check_p(name, p);
  const double pp = uses_p(name) ? p : 2.0;
  std::vector<GraphFunction> starts = ascent_starts(graph, options.samples_per_edge, options.starts, seed);
  for (const GraphFunction& extra : extra_starts) {
    GraphFunction u = extra;
    zero_on_boundary(u);
    starts.push_back(std::move(u));
  }

  const RatioObjective objective(starts.front(), name, pp);
  Eigen::SimplicialLDLT<detail::SparseMatrix> preconditioner;
  preconditioner.compute(detail::assemble_system(starts.front(), objective.weights(), 1.0, objective.fixed()));
  if (preconditioner.info() != Eigen::Success) throw DegenerateInput("estimate_sharp_constant: factorization failed");

  double best = -std::numeric_limits<double>::infinity();
  GraphFunction best_u = starts.front();
  for (GraphFunction& u : starts) {
    if (u.samples_per_edge() != starts.front().samples_per_edge() || &u.graph() != graph.get()) {
      throw InvalidParameter("estimate_sharp_constant: start lives on a different discretization");
    }
    if (!(integrate_power(u, 2.0) > 0.0)) continue;
    u = rescale_mass(u, 1.0);
    double f = objective.value(u);
    double step = 1.0;
    for (int it = 0; it < budget && std::isfinite(f); ++it) {
      const Vector grad = objective.gradient(u);
      const Vector dir = preconditioner.solve(grad);
      const double slope = grad.dot(dir);
      if (!(slope > 0.0)) break;
      const Vector x = detail::to_vector(u.dofs());
      bool accepted = false;
      step = std::min(step * 2.0, 1e6);
      for (int trial = 0; trial < 40; ++trial, step *= 0.5) {
        GraphFunction candidate = u;
        detail::from_vector(x + step * dir, candidate.dofs());
        const double mass = integrate_power(candidate, 2.0);
        if (!(mass > 0.0)) continue;
        candidate *= 1.0 / std::sqrt(mass);
        const double fc = objective.value(candidate);
        if (std::isfinite(fc) && fc > f + 1e-4 * step * slope) {
          u = std::move(candidate);
          f = fc;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    if (std::isfinite(f) && f > best) {
      best = f;
      best_u = u;
    }
  }
  if (!std::isfinite(best)) throw DegenerateInput("estimate_sharp_constant: no start has a finite ratio");
  // Report the ratio recomputed by the public evaluator on the witness.
  return {inequality_ratio(best_u, name, p).value, best_u};
}

namespace {

struct Step {
  int edge;
  bool forward;  // walked from tail to head
};

std::vector<Step> orient_path(const MetricGraph& g, const std::vector<int>& edges) {
  std::vector<Step> steps;
  if (edges.empty()) return steps;
  int current;
  {
    const Edge& first = g.edge(edges.front());
    if (edges.size() == 1) {
      current = first.tail;
    } else {
      const Edge& second = g.edge(edges[1]);
      const bool tail_shared = first.tail == second.tail || first.tail == second.head;
      current = tail_shared ? first.head : first.tail;
    }
  }
  for (int e : edges) {
    const Edge& edge = g.edge(e);
    if (edge.tail == current) {
      steps.push_back({e, true});
      current = edge.head;
    } else if (edge.head == current) {
      steps.push_back({e, false});
      current = edge.tail;
    } else {
      throw DegenerateInput("sobolev_chain: path edges are not consecutive");
    }
  }
  return steps;
}

double sample_along(const GraphFunction& u, const Step& s, int k) {
  const int n = u.samples_per_edge();
  return u.sample(s.edge, s.forward ? k : n - 1 - k);
}

double edge_grad_l1(const GraphFunction& u, int e) {
  double sum = 0.0;
  for (int k = 0; k + 1 < u.samples_per_edge(); ++k) sum += std::abs(u.sample(e, k + 1) - u.sample(e, k));
  return sum;
}

double edge_mass(const GraphFunction& u, int e) {
  const int n = u.samples_per_edge();
  double sum = 0.5 * (u.sample(e, 0) * u.sample(e, 0) + u.sample(e, n - 1) * u.sample(e, n - 1));
  for (int k = 1; k < n - 1; ++k) sum += u.sample(e, k) * u.sample(e, k);
  return sum * u.spacing(e);
}

struct PathWalk {
  std::vector<Step> steps;
  std::map<int, double> cumulative_at_vertex;  // signed integral of u' from the path start
  double grad_l1 = 0.0;
  double mass = 0.0;
};

PathWalk walk_path(const GraphFunction& u, const std::vector<int>& edges) {
  const MetricGraph& g = u.graph();
  PathWalk w;
  w.steps = orient_path(g, edges);
  double cum = 0.0;
  const int n = u.samples_per_edge();
  for (const Step& s : w.steps) {
    const int start = s.forward ? g.edge(s.edge).tail : g.edge(s.edge).head;
    w.cumulative_at_vertex.emplace(start, cum);
    cum += sample_along(u, s, n - 1) - sample_along(u, s, 0);
    w.grad_l1 += edge_grad_l1(u, s.edge);
    w.mass += edge_mass(u, s.edge);
  }
  if (!w.steps.empty()) {
    const Step& last = w.steps.back();
    w.cumulative_at_vertex.emplace(last.forward ? g.edge(last.edge).head : g.edge(last.edge).tail, cum);
  }
  return w;
}

// One side of the argument: every point x of a "primary" path P_a lying in the
// segment S_ab (shared horizontal edge plus one slanted edge) is reached
// directly along P_a, or along the crossing path Q_b up to the anchor vertex and
// then inside S_ab. Updates the chain fields and returns sum_a ||u||^2_{P_a}.
struct SideInputs {
  const std::map<int, std::vector<int>>* primary;
  const std::map<int, std::vector<int>>* crossing;
  const std::map<IndexPair, SegmentPair>* segments;  // key (a, b)
  const std::map<IndexPair, int>* anchors;           // key (a, b)
};

double run_side(const GraphFunction& u, const SideInputs& in, double l, double total_grad_l1, SobolevChain& chain) {
  const MetricGraph& g = u.graph();
  const int n = u.samples_per_edge();
  std::map<int, PathWalk> crossing_walks;
  std::map<int, double> crossing_grad;
  double crossing_grad_total = 0.0;
  for (const auto& [b, edges] : *in.crossing) {
    crossing_walks.emplace(b, walk_path(u, edges));
    crossing_grad[b] = crossing_walks.at(b).grad_l1;
    crossing_grad_total += crossing_grad[b];
  }
  std::map<int, int> segment_of_edge;  // for the current primary path
  double side_mass = 0.0;
  for (const auto& [a, edges] : *in.primary) {
    segment_of_edge.clear();
    std::map<int, double> segment_grad;
    for (const auto& [key, seg] : *in.segments) {
      if (key.first != a) continue;
      segment_of_edge[seg.horizontal] = key.second;
      segment_of_edge[seg.slanted] = key.second;
      segment_grad[key.second] = edge_grad_l1(u, seg.horizontal) + edge_grad_l1(u, seg.slanted);
    }
    const PathWalk walk = walk_path(u, edges);
    side_mass += walk.mass;
    double const1_lhs = 0.0;
    double const2_lhs = 0.0;
    double cum = 0.0;
    for (const Step& s : walk.steps) {
      const int b = segment_of_edge.at(s.edge);
      const int anchor = in.anchors->at({a, b});
      const PathWalk& cross = crossing_walks.at(b);
      const double len = g.edge(s.edge).length;
      const1_lhs += len * crossing_grad.at(b);
      const2_lhs += len * segment_grad.at(b);
      double local = cum;
      for (int k = 0; k < n; ++k) {
        if (k > 0) local += sample_along(u, s, k) - sample_along(u, s, k - 1);
        const double value = sample_along(u, s, k);
        chain.direct_identity_error = std::max(chain.direct_identity_error, std::abs(value - local));
        // Second route: the crossing path up to the anchor, then inside the segment.
        const double via_anchor = cross.cumulative_at_vertex.at(anchor) + (local - walk.cumulative_at_vertex.at(anchor));
        chain.indirect_identity_error = std::max(chain.indirect_identity_error, std::abs(value - via_anchor));
        const double bound = walk.grad_l1 * (crossing_grad.at(b) + segment_grad.at(b));
        chain.pointwise_violation = std::max(chain.pointwise_violation, value * value - bound);
      }
      cum += sample_along(u, s, n - 1) - sample_along(u, s, 0);
    }
    const double const1_rhs = 2.0 * l * crossing_grad_total;
    const double const2_rhs = 2.0 * l * walk.grad_l1;
    const auto rel = [](double x, double y) {
      const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
      return std::abs(x - y) / scale;
    };
    chain.const1_error = std::max(chain.const1_error, rel(const1_lhs, const1_rhs));
    chain.const2_error = std::max(chain.const2_error, rel(const2_lhs, const2_rhs));
    chain.path_bound_violation =
        std::max(chain.path_bound_violation, walk.mass - 4.0 * l * total_grad_l1 * walk.grad_l1);
  }
  return side_mass;
}

}  // namespace

SobolevChain sobolev_chain(const GraphFunction& u, const HoneycombLattice& lat, const PathFamily& paths) {
  if (&u.graph() != lat.graph.get()) throw InvalidParameter("sobolev_chain: function lives on another graph");
  SobolevChain chain;
  chain.mass = integrate_power(u, 2.0);
  chain.grad_l1 = gradient_norms(u).l1;
  chain.path_bound_violation = -std::numeric_limits<double>::infinity();
  chain.pointwise_violation = -std::numeric_limits<double>::infinity();
  const double l = lat.edge_length;

  // L side: x in I_i^j on L_i; the second route runs down R_j to v_i^j.
  const SideInputs l_side{&paths.l_paths, &paths.r_paths, &paths.i_segments, &paths.v_vertices};
  chain.l_paths_mass = run_side(u, l_side, l, chain.grad_l1, chain);
  // R side: x in J_j^i on R_j; the second route runs along L_i to w_j^i.
  const SideInputs r_side{&paths.r_paths, &paths.l_paths, &paths.j_segments, &paths.w_vertices};
  chain.r_paths_mass = run_side(u, r_side, l, chain.grad_l1, chain);

  chain.norm_violation = chain.mass - (chain.l_paths_mass + chain.r_paths_mass);
  chain.final_violation = chain.mass - 8.0 * l * chain.grad_l1 * chain.grad_l1;
  return chain;
}

}  // namespace hexnls
