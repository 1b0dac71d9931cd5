#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hexnls/functionals.hpp"
#include "hexnls/graph_function.hpp"
#include "hexnls/honeycomb.hpp"

namespace hexnls {

struct SolverConfig {
  double step = 1.0;  // initial line-search step
  int max_iters = 4000;
  double energy_tol = 1e-8;     // relative to the size of the energy terms
  double residual_tol = 1e-6;   // relative to ||u||
  double spread_threshold = 0.05;
  double boundary_radius = 2.0;  // in edges
  std::uint64_t seed = 0;
  int samples_per_edge = kDefaultSamplesPerEdge;

  /// Throws InvalidParameter on out-of-range fields.
  void validate() const;
};

enum class Classification { GroundState, SpreadToZero, UnboundedBelow, Inconclusive };

std::string_view to_string(Classification c);
Classification classification_from_string(std::string_view name);

/// Named initial states. `automatic` runs soliton-bump, trial-eps and uniform
/// and keeps the lowest final energy.
enum class Initializer { soliton_bump, trial_eps, uniform, random, automatic };

std::string_view to_string(Initializer init);
Initializer initializer_from_string(std::string_view name);

struct TraceRow {
  int iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
  double step = 0.0;
  double boundary_mass_fraction = 0.0;
};

struct SolveOutcome {
  Classification classification = Classification::Inconclusive;
  EnergyReport final_energy;
  /// Last iterate. It is a minimizer only when classification is GroundState.
  GraphFunction state;
  double lagrange_multiplier = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double boundary_mass_fraction = 0.0;
  std::string initializer;
  std::vector<TraceRow> trace;  // filled when requested
};

/// Minimizes E(., G) at mass mu among functions vanishing on the boundary
/// vertices, then classifies the result. Descent runs along the
/// H^1-preconditioned gradient on the mass sphere with Armijo backtracking;
/// Newton steps finish near a critical point. Every accepted step lowers the
/// energy.
SolveOutcome minimize(const std::shared_ptr<const MetricGraph>& graph, double p, double mu, const SolverConfig& cfg,
                      Initializer init = Initializer::automatic, bool record_trace = false);
SolveOutcome minimize(const std::shared_ptr<const MetricGraph>& graph, double p, double mu, const SolverConfig& cfg,
                      const GraphFunction& init, bool record_trace = false);

/// Initial state of mass mu for a named initializer (not `automatic`).
GraphFunction initial_state(const std::shared_ptr<const MetricGraph>& graph, double p, double mu,
                            const SolverConfig& cfg, Initializer init);

struct StationarityCheck {
  double lambda = 0.0;
  double residual = 0.0;
};

/// lambda = (||u'||^2 - ||u||_p^p) / mu and the W-norm of (grad E(u) - lambda u)
/// over the free degrees of freedom, relative to ||u||.
StationarityCheck euler_lagrange_residual(const GraphFunction& u, double p);

struct CriticalMass {
  double mu_star = 0.0;
  std::pair<double, double> bracket;
  /// Every (mu, classification) evaluated, in evaluation order.
  std::vector<std::pair<double, Classification>> samples;
  /// Ground state found at the upper end of the final bracket.
  std::optional<GraphFunction> upper_state;
};

/// Bisection on "minimize returns GroundState" until the bracket's relative
/// width is at most `rel_tol`. The GroundState state at the upper end seeds
/// the solves inside the bracket.
CriticalMass bisect_critical_mass(const std::shared_ptr<const MetricGraph>& graph, double p, double mu_lo,
                                  double mu_hi, const SolverConfig& cfg, double rel_tol);

struct UnboundedProbe {
  double width = 0.0;
  int samples_per_edge = 0;
  EnergyReport energy;
  double refinement_change = 0.0;  // energy change on doubling the samples, relative to kinetic + potential
};

struct UnboundedOptions {
  int base_samples = kDefaultSamplesPerEdge;
  double samples_per_width = 32.0;  // sample intervals across one width
  int max_samples = 4097;
  double gate_tolerance = 1e-3;
};

/// Energies at p = 6 of mass-mu profiles sech(x / w)^(1/2) squeezed along L_0
/// through the origin (with short smooth tails on the attached edges).
/// Throws ResolutionError when a width needs more than max_samples per edge
/// or the doubling gate fails.
std::vector<UnboundedProbe> demonstrate_unbounded(const HoneycombLattice& lat, double mu,
                                                  const std::vector<double>& widths,
                                                  const UnboundedOptions& options = {});

std::string trace_csv(const std::vector<TraceRow>& trace);
std::string outcome_json(const SolveOutcome& outcome, double p, double mu, const SolverConfig& cfg, int indent = 2);

}  // namespace hexnls
