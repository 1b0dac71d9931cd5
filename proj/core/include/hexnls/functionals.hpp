#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hexnls/graph_function.hpp"
#include "hexnls/honeycomb.hpp"
#include "hexnls/parallel.hpp"

namespace hexnls {

struct EnergyReport {
  double kinetic = 0.0;    // 1/2 ||u'||^2
  double potential = 0.0;  // 1/p ||u||_p^p
  double total = 0.0;      // kinetic - potential
  double mass = 0.0;
  double p = 0.0;
};

/// NLS energy of u for p in (2, 6].
EnergyReport energy(const GraphFunction& u, double p);

/// Scale-invariant ratios LHS / (RHS without constant):
///   sobolev2d  ||u||_2 / ||u'||_1
///   sobolev1d  ||u||_inf / ||u'||_1
///   gn1d       ||u||_p^p / (||u||_2^(p/2+1) ||u'||_2^(p/2-1))
///   gn2d       ||u||_p^p / (||u||_2^2 ||u'||_2^(p-2))
///   gn_interp  ||u||_p^p / (||u'||_2^2 ||u||_2^(p-2))
enum class InequalityKind { sobolev2d, sobolev1d, gn1d, gn2d, gn_interp };

std::string_view to_string(InequalityKind kind);
InequalityKind inequality_from_string(std::string_view name);

struct FunctionSummary {
  double mass = 0.0;
  double lp = 0.0;
  double linf = 0.0;
  double grad_l1 = 0.0;
  double grad_l2sq = 0.0;
  int argmax_dof = -1;
};

struct InequalityRatio {
  InequalityKind name = InequalityKind::sobolev2d;
  double p = 2.0;
  double value = 0.0;
  FunctionSummary witness;
};

InequalityRatio inequality_ratio(const GraphFunction& u, InequalityKind name, double p);

struct SharpConstantEstimate {
  double c_hat = 0.0;
  GraphFunction witness;
};

struct AscentOptions {
  int starts = 50;
  int samples_per_edge = kDefaultSamplesPerEdge;
};

/// Lower bound on the discrete sharp constant of `name` on `graph` among
/// functions vanishing on the boundary: the best ratio reached by
/// preconditioned gradient ascent on the log-ratio from a fixed multi-start
/// set, running `budget` iterations per start. Deterministic given `seed`,
/// and nondecreasing in `budget`.
SharpConstantEstimate estimate_sharp_constant(InequalityKind name, double p,
                                              const std::shared_ptr<const MetricGraph>& graph, int budget,
                                              std::uint64_t seed, const AscentOptions& options = {},
                                              std::span<const GraphFunction> extra_starts = {});

/// Vertex values uniform in [-1, 1] times exp(-gamma * dist(center, v)),
/// linear along edges, zero on the boundary.
GraphFunction random_envelope_function(const std::shared_ptr<const MetricGraph>& graph, int samples_per_edge,
                                       double gamma, int center, Rng& rng);

/// Member `index` of the random corpus: gamma = {0.05, 0.2, 1}[index % 3],
/// centered at central_vertex, random stream split_seed(seed, index).
GraphFunction corpus_function(const std::shared_ptr<const MetricGraph>& graph, int index, std::uint64_t seed,
                              int samples_per_edge = kDefaultSamplesPerEdge);

/// Corpus of `count` random envelope functions cycling gamma over
/// {0.05, 0.2, 1}; function i uses the random stream split_seed(seed, i).
std::vector<GraphFunction> random_corpus(const std::shared_ptr<const MetricGraph>& graph, int count,
                                         std::uint64_t seed, int samples_per_edge = kDefaultSamplesPerEdge);

/// Term-by-term evaluation of the path-decomposition argument bounding
/// ||u||_2 by 2 sqrt(2l) ||u'||_1 for u vanishing on the boundary. All
/// "violation" fields are <= 0 (up to rounding) when every step holds.
struct SobolevChain {
  double mass = 0.0;
  double grad_l1 = 0.0;
  double l_paths_mass = 0.0;  // sum_i ||u||^2 on L_i
  double r_paths_mass = 0.0;  // sum_j ||u||^2 on R_j
  double direct_identity_error = 0.0;    // max |u(x) - int_{L_i(-inf,x)} u'|
  double indirect_identity_error = 0.0;  // max |u(x) - int_{R_j(-inf,v)} u' - int_{L_i(v,x)} u'|
  double pointwise_violation = 0.0;      // max |u(x)|^2 - int_{L_i}|u'| (int_{R_j}|u'| + int_{I_i^j}|u'|)
  double const1_error = 0.0;             // relative gap in int_{L_i} int_{R_j(x)}|u'| dx = 2l sum_j int_{R_j}|u'|
  double const2_error = 0.0;             // relative gap in int_{L_i} int_{I_i^j(x)}|u'| dx = 2l int_{L_i}|u'|
  double path_bound_violation = 0.0;     // max over paths of ||u||^2_{path} - 4l ||u'||_1 int_{path}|u'|
  double norm_violation = 0.0;           // ||u||^2 - (l_paths_mass + r_paths_mass)
  double final_violation = 0.0;          // ||u||^2 - 8l ||u'||_1^2
};

SobolevChain sobolev_chain(const GraphFunction& u, const HoneycombLattice& lat, const PathFamily& paths);

}  // namespace hexnls
