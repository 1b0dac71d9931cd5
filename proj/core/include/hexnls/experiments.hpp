#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hexnls/solver.hpp"

namespace hexnls {

enum class ExperimentKind { inequalities, trial_forms, phase_diagram, critical_mass, unbounded_p6, soliton_check };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

struct GraphSpec {
  std::string family = "honeycomb";  // honeycomb | line | square
  int radius = 20;
  double edge_length = 1.0;
  double half_length = 30.0;  // line only
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::trial_forms;
  GraphSpec graph;
  std::vector<double> p;
  std::vector<double> mu;
  std::vector<double> eps;
  std::vector<double> widths;
  std::uint64_t seed = 1;
  int corpus_size = 1000;
  int starts = 50;   // ascent multi-starts
  int budget = 200;  // ascent iterations per start
  int samples_per_edge = kDefaultSamplesPerEdge;
  double slack = 1e-2;            // multiplicative slack on inequality bounds
  double closed_form_tol = 1e-3;  // closed form vs quadrature
  double bracket_tol = 0.02;      // relative bisection width
  double bound_slack = 0.05;      // critical mass vs analytic bound
  double energy_floor = -10.0;    // unbounded-p6 floor
  double bounded_tol = 1e-6;      // unbounded-p6: "bounded below by 0"
  double profile_tol = 1e-2;      // soliton-check L2 discrepancy
  SolverConfig solver;
  std::string output = "out";

  /// Throws InvalidParameter when the fields cannot describe a run of `kind`.
  void validate() const;
};

/// Parses a JSON experiment description. Unknown keys are rejected.
ExperimentSpec spec_from_json(std::string_view text);
std::string spec_to_json(const ExperimentSpec& spec, int indent = 2);

/// Command-line overrides; unset fields leave the spec alone.
struct SpecOverrides {
  std::optional<std::vector<double>> p;
  std::optional<std::vector<double>> mu;
  std::optional<int> radius;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
};
void apply_overrides(ExperimentSpec& spec, const SpecOverrides& overrides);

struct PhasePoint {
  double p = 0.0;
  double mu = 0.0;
  Classification classification = Classification::Inconclusive;
  double energy = 0.0;
  std::int64_t runtime_ms = 0;

  bool operator==(const PhasePoint&) const = default;
};

/// Columns p, mu, classification, energy, runtime_ms (the last one only when
/// `with_runtime`), sorted by (p, mu). Reals are written in shortest
/// round-trip form.
std::string render_phase_csv(std::vector<PhasePoint> points, bool with_runtime = true);
std::vector<PhasePoint> parse_phase_csv(std::string_view text);

struct RunReport {
  int exit_code = 0;                  // 0 pass, 1 assertion failure
  std::vector<std::string> failures;  // one line per failed assertion
  std::vector<std::string> files;     // data files written, relative to the output directory
};

/// Runs the experiment, writes its data files plus manifest.json into
/// spec.output and reports the embedded assertions. Throws IoError when the
/// output cannot be written.
RunReport run_experiment(const ExperimentSpec& spec);

/// Version string recorded in manifests ("git describe" when available).
std::string_view version_string();

}  // namespace hexnls
