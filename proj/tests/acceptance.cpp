// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Scratch output goes to $TMPDIR/hexnls_acceptance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hexnls/analytic_forms.hpp"
#include "hexnls/experiments.hpp"
#include "hexnls/solver.hpp"

using namespace hexnls;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Rows of a CSV file as maps from header name to cell.
std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  const auto cells = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string c;
    while (std::getline(ss, c, ',')) out.push_back(c);
    return out;
  };
  if (std::getline(in, line)) header = cells(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = cells(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < c.size(); ++i) row[header[i]] = c[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path root_dir() {
  static const fs::path dir = fs::temp_directory_path() / "hexnls_acceptance";
  return dir;
}

ExperimentSpec spec(const std::string& json, const std::string& out) {
  ExperimentSpec s = spec_from_json(json);
  s.output = (root_dir() / out).string();
  fs::remove_all(s.output);
  return s;
}

std::string first_failure(const RunReport& r) {
  return r.failures.empty() ? std::string() : "; first failure: " + r.failures.front();
}

const char* kTrialSpec = R"({"kind": "trial-forms", "eps": [0.1, 0.2, 0.5], "p": [2, 3, 4], "mu": [0.5, 1, 10]})";
const char* kInequalitySpec = R"({"kind": "inequalities", "graph": {"radius": 6}, "p": [3, 4, 5, 6],
  "corpus_size": 1000, "starts": 50, "budget": 100, "samples_per_edge": 9, "seed": 7})";

Verdict closed_forms() {
  const Clock::time_point t0 = Clock::now();
  const ExperimentSpec s = spec(kTrialSpec, "trial_forms");
  const RunReport r = run_experiment(s);
  double worst = 0.0;
  int rows = 0;
  for (const auto& row : read_csv(fs::path(s.output) / "trial_forms.csv")) {
    if (row.at("quantity") == "lp" || row.at("quantity") == "kinetic") {
      worst = std::max(worst, std::stod(row.at("rel_err")));
      ++rows;
    }
  }
  const double t = seconds_since(t0);
  const bool ok = r.exit_code == 0 && rows == 12 && worst < 1e-3 && t < 30.0;
  return {ok, std::to_string(rows) + " comparisons, max rel err " + fmt("%.2e", worst) + ", " + fmt("%.1f s", t) +
                  first_failure(r)};
}

Verdict normalization() {
  const ExperimentSpec s = spec(kTrialSpec, "normalization");
  run_experiment(s);
  double alg = 0.0, quad = 0.0;
  int combos = 0;
  for (const auto& row : read_csv(fs::path(s.output) / "trial_forms.csv")) {
    const double rel = std::stod(row.at("rel_err"));
    if (row.at("quantity") == "normalization_algebraic") {
      alg = std::max(alg, rel);
      ++combos;
    } else if (row.at("quantity") == "normalization_quadrature") {
      quad = std::max(quad, rel);
    }
  }
  const bool ok = combos == 9 && alg < 1e-12 && quad < 1e-6;
  return {ok, std::to_string(combos) + " (eps, mu) pairs, algebraic " + fmt("%.1e", alg) + ", quadrature " +
                  fmt("%.1e", quad)};
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Verdict scaling_exponents() {
  bool ok = true;
  std::string detail;
  for (double p : {3.0, 5.0}) {
    std::vector<double> le, lk, lp;
    for (int i = 0; i <= 40; ++i) {
      const double eps = std::pow(10.0, -3.0 + 2.0 * i / 40.0);
      const TrialEnergyTerms t = trial_energy_terms(eps, p, 1.0);
      le.push_back(std::log(eps));
      lk.push_back(std::log(std::abs(t.kinetic)));
      lp.push_back(std::log(std::abs(t.potential)));
    }
    const double sk = fit_slope(le, lk), sp = fit_slope(le, lp);
    ok = ok && std::abs(sk - 2.0) <= 0.02 && std::abs(sp - (p - 2.0)) <= 0.05;
    detail += fmt("p=%g: ", p) + fmt("kinetic slope %.4f, ", sk) + fmt("potential slope %.4f; ", sp);
  }
  return {ok, detail};
}

struct InequalityRun {
  RunReport report;
  fs::path dir;
  double seconds = 0.0;
};

const InequalityRun& inequality_run() {
  static const InequalityRun run = [] {
    const Clock::time_point t0 = Clock::now();
    const ExperimentSpec s = spec(kInequalitySpec, "inequalities");
    InequalityRun out{run_experiment(s), s.output, 0.0};
    out.seconds = seconds_since(t0);
    return out;
  }();
  return run;
}

std::map<std::string, double> max_ratios(const fs::path& file, const std::string& value_column) {
  std::map<std::string, double> out;
  for (const auto& row : read_csv(file)) {
    const std::string key = row.at("name") + "@" + row.at("p");
    const double v = std::stod(row.at(value_column));
    out[key] = std::max(out.count(key) ? out[key] : -1e300, v);
  }
  return out;
}

Verdict sobolev_bound() {
  const InequalityRun& run = inequality_run();
  const double bound = 2.0 * std::sqrt(2.0) * 1.01;
  const auto corpus = max_ratios(run.dir / "inequalities.csv", "ratio");
  const auto ascent = max_ratios(run.dir / "ascent.csv", "c_hat");
  const double c = corpus.at("sobolev2d@2"), a = ascent.at("sobolev2d@2");
  const std::size_t functions = std::stoul(read_csv(run.dir / "inequalities.csv").back().at("function")) + 1;
  const bool ok = std::max(c, a) <= bound && run.seconds < 120.0 && functions >= 1000;
  return {ok, "corpus max " + fmt("%.4f", c) + ", ascent max " + fmt("%.4f", a) + " vs " + fmt("%.4f", bound) +
                  ", " + fmt("%.1f s", run.seconds)};
}

Verdict gn1d_bound() {
  const InequalityRun& run = inequality_run();
  const auto corpus = max_ratios(run.dir / "inequalities.csv", "ratio");
  const auto ascent = max_ratios(run.dir / "ascent.csv", "c_hat");
  bool ok = true;
  std::string detail;
  for (const char* p : {"3", "4", "5", "6"}) {
    const std::string key = std::string("gn1d@") + p;
    const double worst = std::max(corpus.at(key), ascent.at(key));
    ok = ok && worst <= 1.01;
    detail += std::string("p=") + p + " max " + fmt("%.4f", worst) + "; ";
  }
  ok = ok && run.report.exit_code == 0;
  return {ok, detail + first_failure(run.report)};
}

Verdict subcritical_witness() {
  bool ok = true;
  std::string detail;
  const HoneycombLattice small = build_honeycomb(20, 1.0);
  const HoneycombLattice large = build_honeycomb(30, 1.0);
  for (double mu : {0.1, 1.0, 10.0}) {
    const SolveOutcome a = minimize(small.graph, 3.0, mu, SolverConfig{});
    const SolveOutcome b = minimize(large.graph, 3.0, mu, SolverConfig{});
    const double drift = std::abs(b.final_energy.total - a.final_energy.total) / std::abs(a.final_energy.total);
    const bool here = a.classification == Classification::GroundState && a.final_energy.total < 0.0 &&
                      a.residual < 1e-6 && drift < 1e-3;
    ok = ok && here;
    detail += fmt("mu=%g: ", mu) + std::string(to_string(a.classification)) + fmt(" E=%.6e", a.final_energy.total) +
              fmt(" res=%.1e", a.residual) + fmt(" R30 drift=%.1e", drift) + (here ? "" : " [fails]") + "; ";
  }
  return {ok, detail};
}

Verdict critical_mass() {
  const ExperimentSpec s = spec(R"({"kind": "critical-mass", "graph": {"radius": 20}, "p": [5],
    "mu_grid": {"min": 0.001, "max": 100, "points": 13}, "starts": 10, "budget": 100, "seed": 1,
    "tolerances": {"bracket": 0.02, "bound_slack": 0.05}})",
                                "critical_mass");
  const Clock::time_point t0 = Clock::now();
  const RunReport r = run_experiment(s);
  std::string detail;
  for (const auto& row : read_csv(fs::path(s.output) / "critical_mass.csv")) {
    detail = "transitions " + row.at("transitions") + ", bracket [" + row.at("mu_lo") + ", " + row.at("mu_hi") +
             "], rel width " + row.at("rel_width") + ", bound " + row.at("mu_bound") + " (C_hat " + row.at("c_hat") +
             ")";
  }
  return {r.exit_code == 0, detail + ", " + fmt("%.0f s", seconds_since(t0)) + first_failure(r)};
}

Verdict critical_power() {
  const ExperimentSpec s = spec(R"({"kind": "unbounded-p6", "graph": {"radius": 20}, "mu": [0.01, 10],
    "widths": [1, 0.5, 0.25, 0.125], "tolerances": {"energy_floor": -10, "bounded": 1e-6}})",
                                "unbounded");
  const RunReport r = run_experiment(s);
  std::string detail;
  for (const auto& row : read_csv(fs::path(s.output) / "unbounded.csv")) {
    if (row.at("width") == "0.125") detail += "mu=" + row.at("mu") + " narrowest E=" + row.at("total") + "; ";
  }
  return {r.exit_code == 0, detail + first_failure(r)};
}

Verdict line_soliton() {
  const ExperimentSpec s = spec(R"({"kind": "soliton-check", "graph": {"family": "line", "half_length": 30},
    "p": [4], "mu": [2]})",
                                "soliton");
  const RunReport r = run_experiment(s);
  std::string detail;
  for (const auto& row : read_csv(fs::path(s.output) / "soliton.csv")) {
    detail = row.at("classification") + ", L2 discrepancy " + row.at("profile_discrepancy") + ", E " +
             row.at("energy") + " vs oracle " + row.at("oracle_energy");
  }
  return {r.exit_code == 0, detail + first_failure(r)};
}

Verdict combinatorics() {
  const HoneycombLattice lat = build_honeycomb(2, 1.0);
  const MetricGraph& g = *lat.graph;
  const PathFamily paths = decompose_paths(lat);
  const BridgeFamily bridges = decompose_bridges(lat);
  int exceptions = 0;
  std::vector<int> covered(static_cast<std::size_t>(g.num_edges()), 0);
  for (const auto& [i, es] : paths.l_paths)
    for (int e : es) covered[e] = 1;
  for (const auto& [j, es] : paths.r_paths)
    for (int e : es) covered[e] = 1;
  exceptions += static_cast<int>(std::count(covered.begin(), covered.end(), 0));
  int pairs = 0;
  for (const auto& [i, li] : paths.l_paths) {
    const std::set<int> a(li.begin(), li.end());
    for (const auto& [j, rj] : paths.r_paths) {
      ++pairs;
      int common = 0, kind_ok = 0;
      for (int e : rj) {
        if (a.count(e)) {
          ++common;
          kind_ok += g.edge(e).kind == EdgeKind::horizontal;
        }
      }
      if (common != 1 || kind_ok != 1) ++exceptions;
    }
  }
  int bridge_count = 0;
  for (const auto& [k, line] : bridges.lines) {
    for (const Bridge& b : line) {
      ++bridge_count;
      const Edge& e = g.edge(b.edge);
      const LatticeSite t = lat.sites[static_cast<std::size_t>(e.tail)];
      const LatticeSite h = lat.sites[static_cast<std::size_t>(e.head)];
      const bool parity = ((b.j - k) % 2 + 2) % 2 == 0;
      const bool ends = std::min(t.path, h.path) == b.j && std::max(t.path, h.path) == b.j + 1 && t.offset == k &&
                        h.offset == k;
      const bool zero = b.zero_vertex == e.tail && t.path == (b.j >= 0 ? b.j : b.j + 1);
      if (!parity || !ends || !zero) ++exceptions;
    }
  }
  return {exceptions == 0, std::to_string(g.num_edges()) + " edges, " + std::to_string(pairs) + " (i, j) pairs, " +
                               std::to_string(bridge_count) + " bridges, " + std::to_string(exceptions) +
                               " exceptions"};
}

Verdict reproducibility() {
  const std::vector<std::string> specs = {
      kTrialSpec,
      R"({"kind": "inequalities", "graph": {"radius": 4}, "p": [3, 6], "corpus_size": 120, "starts": 5,
          "budget": 30, "samples_per_edge": 9, "seed": 3})",
      R"({"kind": "phase-diagram", "graph": {"radius": 6}, "p": [3, 5, 6], "mu": [0.1, 10],
          "samples_per_edge": 9, "seed": 11})",
      R"({"kind": "unbounded-p6", "graph": {"radius": 6}, "mu": [0.01, 10], "widths": [1, 0.5]})",
      R"({"kind": "soliton-check", "graph": {"family": "line", "half_length": 30}, "p": [3, 4], "mu": [2]})"};
  int files = 0, mismatches = 0;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const ExperimentSpec a = spec(specs[k], "repro_a" + std::to_string(k));
    const ExperimentSpec b = spec(specs[k], "repro_b" + std::to_string(k));
    const RunReport ra = run_experiment(a);
    run_experiment(b);
    for (const std::string& f : ra.files) {
      ++files;
      if (slurp(fs::path(a.output) / f) != slurp(fs::path(b.output) / f)) ++mismatches;
    }
  }
  return {mismatches == 0 && files > 0,
          std::to_string(files) + " data files compared, " + std::to_string(mismatches) + " differ"};
}

}  // namespace

int main() {
  fs::create_directories(root_dir());
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"closed-form trial integrals", closed_forms},
      {"normalization identity", normalization},
      {"trial energy scaling exponents", scaling_exponents},
      {"honeycomb Sobolev bound", sobolev_bound},
      {"one-dimensional Gagliardo-Nirenberg bound", gn1d_bound},
      {"subcritical ground states", subcritical_witness},
      {"single transition and critical-mass bracket", critical_mass},
      {"critical power: bounded vs unbounded", critical_power},
      {"line soliton oracle", line_soliton},
      {"path and bridge combinatorics", combinatorics},
      {"byte-identical reruns", reproducibility},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
