#include "hexnls/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "hexnls/analytic_forms.hpp"
#include "hexnls/error.hpp"
#include "hexnls/parallel.hpp"
#include "json.hpp"

#ifndef HEXNLS_VERSION
#define HEXNLS_VERSION "unknown"
#endif

namespace hexnls {

using json = nlohmann::ordered_json;

std::string_view version_string() { return HEXNLS_VERSION; }

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::inequalities:
      return "inequalities";
    case ExperimentKind::trial_forms:
      return "trial-forms";
    case ExperimentKind::phase_diagram:
      return "phase-diagram";
    case ExperimentKind::critical_mass:
      return "critical-mass";
    case ExperimentKind::unbounded_p6:
      return "unbounded-p6";
    case ExperimentKind::soliton_check:
      return "soliton-check";
  }
  return "trial-forms";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::inequalities, ExperimentKind::trial_forms, ExperimentKind::phase_diagram,
                 ExperimentKind::critical_mass, ExperimentKind::unbounded_p6, ExperimentKind::soliton_check}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidParameter("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  const auto need = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidParameter("experiment spec: " + what);
  };
  need(graph.family == "honeycomb" || graph.family == "line" || graph.family == "square",
       "graph.family must be honeycomb, line or square");
  need(graph.radius >= 1, "graph.radius must be >= 1");
  need(graph.edge_length > 0.0, "graph.edge_length must be positive");
  need(graph.half_length > 0.0, "graph.half_length must be positive");
  need(!output.empty(), "output path is empty");
  need(samples_per_edge >= 3, "samples_per_edge must be >= 3");
  need(slack >= 0.0 && closed_form_tol > 0.0 && bracket_tol > 0.0 && bound_slack >= 0.0 && bounded_tol >= 0.0 &&
           profile_tol > 0.0,
       "tolerances must be positive");
  for (double m : mu) need(m > 0.0, "every mu must be positive");
  for (double e : eps) need(e > 0.0, "every eps must be positive");
  solver.validate();
  switch (kind) {
    case ExperimentKind::inequalities:
      need(corpus_size >= 1, "corpus_size must be >= 1");
      for (double q : p) need(q >= 2.0, "inequality exponents must be >= 2");
      break;
    case ExperimentKind::trial_forms:
      need(!eps.empty() && !p.empty(), "trial-forms needs eps and p lists");
      need(graph.family == "honeycomb", "trial-forms runs on the honeycomb");
      for (double q : p) need(q >= 2.0, "trial-forms exponents must be >= 2");
      break;
    case ExperimentKind::phase_diagram:
      need(!p.empty() && !mu.empty(), "phase-diagram needs p and mu lists");
      for (double q : p) need(q > 2.0 && q <= 6.0, "phase-diagram exponents must lie in (2, 6]");
      break;
    case ExperimentKind::critical_mass:
      need(!p.empty() && mu.size() >= 2, "critical-mass needs p and at least two mu values");
      for (double q : p) need(q >= 4.0 && q < 6.0, "critical-mass exponents must lie in [4, 6)");
      need(starts >= 1 && budget >= 1, "critical-mass needs starts >= 1 and budget >= 1");
      break;
    case ExperimentKind::unbounded_p6:
      need(!mu.empty() && !widths.empty(), "unbounded-p6 needs mu and widths lists");
      need(graph.family == "honeycomb", "unbounded-p6 runs on the honeycomb");
      break;
    case ExperimentKind::soliton_check:
      need(!p.empty() && !mu.empty(), "soliton-check needs p and mu lists");
      need(graph.family == "line", "soliton-check runs on the line graph");
      for (double q : p) need(q > 2.0 && q < 6.0, "soliton-check exponents must lie in (2, 6)");
      break;
  }
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidParameter("experiment spec: unknown key '" + where + key + "'");
    }
  }
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw InvalidParameter("experiment spec: bad mu_grid");
  std::vector<double> out;
  for (int k = 0; k < points; ++k) out.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1)));
  return out;
}

}  // namespace

ExperimentSpec spec_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("experiment spec: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidParameter("experiment spec: top level must be an object");
  reject_unknown(doc,
                 {"kind", "graph", "p", "mu", "mu_grid", "eps", "widths", "seed", "corpus_size", "starts", "budget",
                  "samples_per_edge", "tolerances", "solver", "output"},
                 "");
  ExperimentSpec s;
  try {
    if (!doc.contains("kind")) throw InvalidParameter("experiment spec: missing 'kind'");
    s.kind = experiment_kind_from_string(doc.at("kind").get<std::string>());
    if (doc.contains("graph")) {
      const json& g = doc.at("graph");
      reject_unknown(g, {"family", "radius", "edge_length", "half_length"}, "graph.");
      s.graph.family = g.value("family", s.graph.family);
      s.graph.radius = g.value("radius", s.graph.radius);
      s.graph.edge_length = g.value("edge_length", s.graph.edge_length);
      s.graph.half_length = g.value("half_length", s.graph.half_length);
    }
    s.p = doc.value("p", s.p);
    s.mu = doc.value("mu", s.mu);
    if (doc.contains("mu_grid")) {
      const json& g = doc.at("mu_grid");
      reject_unknown(g, {"min", "max", "points"}, "mu_grid.");
      const auto grid = log_grid(g.at("min").get<double>(), g.at("max").get<double>(), g.at("points").get<int>());
      s.mu.insert(s.mu.end(), grid.begin(), grid.end());
    }
    s.eps = doc.value("eps", s.eps);
    s.widths = doc.value("widths", s.widths);
    s.seed = doc.value("seed", s.seed);
    s.corpus_size = doc.value("corpus_size", s.corpus_size);
    s.starts = doc.value("starts", s.starts);
    s.budget = doc.value("budget", s.budget);
    s.samples_per_edge = doc.value("samples_per_edge", s.samples_per_edge);
    if (doc.contains("tolerances")) {
      const json& t = doc.at("tolerances");
      reject_unknown(t, {"slack", "closed_form", "bracket", "bound_slack", "energy_floor", "bounded", "profile"},
                     "tolerances.");
      s.slack = t.value("slack", s.slack);
      s.closed_form_tol = t.value("closed_form", s.closed_form_tol);
      s.bracket_tol = t.value("bracket", s.bracket_tol);
      s.bound_slack = t.value("bound_slack", s.bound_slack);
      s.energy_floor = t.value("energy_floor", s.energy_floor);
      s.bounded_tol = t.value("bounded", s.bounded_tol);
      s.profile_tol = t.value("profile", s.profile_tol);
    }
    if (doc.contains("solver")) {
      const json& c = doc.at("solver");
      reject_unknown(c, {"step", "max_iters", "energy_tol", "residual_tol", "spread_threshold", "boundary_radius"},
                     "solver.");
      s.solver.step = c.value("step", s.solver.step);
      s.solver.max_iters = c.value("max_iters", s.solver.max_iters);
      s.solver.energy_tol = c.value("energy_tol", s.solver.energy_tol);
      s.solver.residual_tol = c.value("residual_tol", s.solver.residual_tol);
      s.solver.spread_threshold = c.value("spread_threshold", s.solver.spread_threshold);
      s.solver.boundary_radius = c.value("boundary_radius", s.solver.boundary_radius);
    }
    s.output = doc.value("output", s.output);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("experiment spec: ") + e.what());
  }
  s.solver.seed = s.seed;
  s.solver.samples_per_edge = s.samples_per_edge;
  return s;
}

std::string spec_to_json(const ExperimentSpec& s, int indent) {
  json doc;
  doc["kind"] = std::string(to_string(s.kind));
  doc["graph"] = {{"family", s.graph.family},
                  {"radius", s.graph.radius},
                  {"edge_length", s.graph.edge_length},
                  {"half_length", s.graph.half_length}};
  doc["p"] = s.p;
  doc["mu"] = s.mu;
  doc["eps"] = s.eps;
  doc["widths"] = s.widths;
  doc["seed"] = s.seed;
  doc["corpus_size"] = s.corpus_size;
  doc["starts"] = s.starts;
  doc["budget"] = s.budget;
  doc["samples_per_edge"] = s.samples_per_edge;
  doc["tolerances"] = {{"slack", s.slack},
                       {"closed_form", s.closed_form_tol},
                       {"bracket", s.bracket_tol},
                       {"bound_slack", s.bound_slack},
                       {"energy_floor", s.energy_floor},
                       {"bounded", s.bounded_tol},
                       {"profile", s.profile_tol}};
  doc["solver"] = {{"step", s.solver.step},
                   {"max_iters", s.solver.max_iters},
                   {"energy_tol", s.solver.energy_tol},
                   {"residual_tol", s.solver.residual_tol},
                   {"spread_threshold", s.solver.spread_threshold},
                   {"boundary_radius", s.solver.boundary_radius}};
  doc["output"] = s.output;
  return doc.dump(indent);
}

void apply_overrides(ExperimentSpec& spec, const SpecOverrides& o) {
  if (o.p) spec.p = *o.p;
  if (o.mu) spec.mu = *o.mu;
  if (o.radius) spec.graph.radius = *o.radius;
  if (o.seed) {
    spec.seed = *o.seed;
    spec.solver.seed = *o.seed;
  }
  if (o.output) spec.output = *o.output;
}

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidParameter("phase csv: bad number '" + std::string(s) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string render_phase_csv(std::vector<PhasePoint> points, bool with_runtime) {
  std::stable_sort(points.begin(), points.end(), [](const PhasePoint& a, const PhasePoint& b) {
    return a.p != b.p ? a.p < b.p : a.mu < b.mu;
  });
  std::string out = with_runtime ? "p,mu,classification,energy,runtime_ms\n" : "p,mu,classification,energy\n";
  for (const PhasePoint& pt : points) {
    out += fmt(pt.p) + ',' + fmt(pt.mu) + ',' + std::string(to_string(pt.classification)) + ',' + fmt(pt.energy);
    if (with_runtime) out += ',' + std::to_string(pt.runtime_ms);
    out += '\n';
  }
  return out;
}

std::vector<PhasePoint> parse_phase_csv(std::string_view text) {
  std::vector<PhasePoint> out;
  bool header = true;
  bool with_runtime = false;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (header) {
      with_runtime = cells.size() == 5;
      if (cells.size() < 4 || cells[0] != "p" || cells[1] != "mu") throw InvalidParameter("phase csv: bad header");
      header = false;
      continue;
    }
    if (cells.size() != (with_runtime ? 5u : 4u)) throw InvalidParameter("phase csv: wrong column count");
    PhasePoint pt;
    pt.p = parse_double(cells[0]);
    pt.mu = parse_double(cells[1]);
    pt.classification = classification_from_string(cells[2]);
    pt.energy = parse_double(cells[3]);
    if (with_runtime) {
      std::int64_t ms = 0;
      const auto res = std::from_chars(cells[4].data(), cells[4].data() + cells[4].size(), ms);
      if (res.ec != std::errc()) throw InvalidParameter("phase csv: bad runtime");
      pt.runtime_ms = ms;
    }
    out.push_back(pt);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

struct RunContext {
  const ExperimentSpec& spec;
  std::filesystem::path dir;
  RunReport report;
  json details = json::object();
  json timings = json::object();

  void write(const std::string& name, const std::string& content) {
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
    report.files.push_back(name);
  }
  void fail(const std::string& message) { report.failures.push_back(message); }
  void check(bool ok, const std::string& message) {
    if (!ok) fail(message);
  }
};

std::shared_ptr<const MetricGraph> make_graph(const GraphSpec& g) {
  if (g.family == "honeycomb") return build_honeycomb(g.radius, g.edge_length).graph;
  if (g.family == "square") return std::make_shared<const MetricGraph>(build_square_grid(g.radius, g.edge_length));
  return std::make_shared<const MetricGraph>(build_line(g.half_length));
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const std::string& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  return row + '\n';
}

void run_inequalities(RunContext& ctx) {
  const ExperimentSpec& s = ctx.spec;
  const auto graph = make_graph(s.graph);
  const double l = s.graph.edge_length;
  const double sobolev_bound = 2.0 * std::sqrt(2.0 * l);
  std::vector<double> ps = s.p;
  std::sort(ps.begin(), ps.end());

  // Per-function rows, computed in parallel and concatenated in index order.
  std::vector<std::string> rows(static_cast<std::size_t>(s.corpus_size));
  std::vector<std::vector<std::string>> failures(rows.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const GraphFunction u = corpus_function(graph, static_cast<int>(i), s.seed, s.samples_per_edge);
    std::string& out = rows[i];
    const auto emit = [&](std::string_view name, double p, double ratio, double bound) {
      const bool ok = ratio <= bound;
      out += csv_row({std::to_string(i), std::string(name), fmt(p), fmt(ratio), fmt(bound), ok ? "pass" : "fail"});
      if (!ok) {
        failures[i].push_back("function " + std::to_string(i) + ": " + std::string(name) + " p=" + fmt(p) +
                              " ratio " + fmt(ratio) + " > " + fmt(bound));
      }
    };
    emit("sobolev2d", 2.0, inequality_ratio(u, InequalityKind::sobolev2d, 2.0).value, sobolev_bound * (1.0 + s.slack));
    for (double p : ps) {
      const double gn1d = inequality_ratio(u, InequalityKind::gn1d, p).value;
      emit("gn1d", p, gn1d, 1.0 + s.slack);
      if (p >= 4.0 && p <= 6.0) {
        // Hoelder between the exponents 4 and 6 bounds the interpolated ratio
        // by the two endpoint ratios; this is exact for the discrete sums.
        const double theta = (p - 4.0) / 2.0;
        const double interp = inequality_ratio(u, InequalityKind::gn_interp, p).value;
        const double bound = std::pow(inequality_ratio(u, InequalityKind::gn_interp, 6.0).value, theta) *
                             std::pow(inequality_ratio(u, InequalityKind::gn2d, 4.0).value, 1.0 - theta);
        emit("gn_interp_holder", p, interp, bound * (1.0 + 1e-12));
      }
      if (p > 2.0 && p < 4.0) {
        // Subcritical energy bound with the 1D constant taken as 1 + slack:
        // E >= 1/2 K - (C/p) K^((p/2-1)/2) mu^((p/2+1)/2), reported as lhs/rhs
        // differences mapped onto a ratio <= 1 form.
        const EnergyReport e = energy(u, p);
        const double k = 2.0 * e.kinetic;
        const double lower = 0.5 * k - (1.0 + s.slack) / p * std::pow(k, (0.5 * p - 1.0) / 2.0) *
                                           std::pow(e.mass, (0.5 * p + 1.0) / 2.0);
        const double gap = lower - e.total;  // <= 0 when the bound holds
        emit("energy_lower_bound", p, gap, 1e-12 * (std::abs(e.total) + e.kinetic + e.potential));
      }
    }
  });
  std::string csv = "function,name,p,ratio,bound,result\n";
  std::size_t violations = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv += rows[i];
    for (const std::string& f : failures[i]) {
      ++violations;
      if (violations <= 20) ctx.fail(f);
    }
  }
  if (violations > 20) ctx.fail(std::to_string(violations - 20) + " further violations");
  ctx.write("inequalities.csv", csv);

  // Ascent-optimized witnesses.
  if (s.starts > 0) {
    const Clock::time_point t0 = Clock::now();
    std::string asc = "name,p,c_hat,bound,result\n";
    AscentOptions opt;
    opt.starts = s.starts;
    opt.samples_per_edge = s.samples_per_edge;
    const auto ascend = [&](InequalityKind kind, double p, double bound) {
      const SharpConstantEstimate est = estimate_sharp_constant(kind, p, graph, s.budget, s.seed, opt);
      const bool ok = est.c_hat <= bound;
      asc += csv_row({std::string(to_string(kind)), fmt(p), fmt(est.c_hat), fmt(bound), ok ? "pass" : "fail"});
      ctx.check(ok, "ascent " + std::string(to_string(kind)) + " p=" + fmt(p) + " reached " + fmt(est.c_hat) + " > " +
                        fmt(bound));
    };
    ascend(InequalityKind::sobolev2d, 2.0, sobolev_bound * (1.0 + s.slack));
    for (double p : ps) ascend(InequalityKind::gn1d, p, 1.0 + s.slack);
    ctx.write("ascent.csv", asc);
    ctx.timings["ascent_ms"] = elapsed_ms(t0);
  }
  ctx.details["violations"] = violations;
}

void run_trial_forms(RunContext& ctx) {
  const ExperimentSpec& s = ctx.spec;
  const double l = s.graph.edge_length;
  // Closed forms for edge length l: the unit-length formulas at eps * l,
  // scaled by l (for int |u|^p) and 1 / l (for int |u'|^2).
  std::string csv = "eps,p,mu,quantity,quadrature,closed_form,rel_err,result\n";
  const auto emit = [&](double eps, double p, double mu, std::string_view what, double quad, double exact,
                        double tol) {
    const double rel = std::abs(quad - exact) / std::abs(exact);
    const bool ok = rel < tol;
    csv += csv_row({fmt(eps), fmt(p), fmt(mu), std::string(what), fmt(quad), fmt(exact), fmt(rel), ok ? "pass" : "fail"});
    ctx.check(ok, std::string(what) + " eps=" + fmt(eps) + " p=" + fmt(p) + " rel err " + fmt(rel));
  };
  for (double eps : s.eps) {
    const int radius = trial_truncation_radius(eps * l);
    const HoneycombLattice lat = build_honeycomb(radius, l);
    const GraphFunction u = trial_function(lat, eps, s.samples_per_edge);
    // Simpson is exact enough on the exponential edge profiles for the
    // normalization check; the kinetic term uses the difference quotients.
    const Quadrature rule = (s.samples_per_edge - 1) % 2 == 0 ? Quadrature::simpson : Quadrature::trapezoid;
    for (double p : s.p) {
      emit(eps, p, 0.0, "lp", integrate_power(u, p, rule), l * trial_lp_integral(eps * l, p), s.closed_form_tol);
    }
    emit(eps, 2.0, 0.0, "kinetic", gradient_norms(u).l2sq, trial_kinetic_integral(eps * l) / l, s.closed_form_tol);
    for (double mu : s.mu) {
      // k^2 int |u|^2 = mu, algebraically and by quadrature.
      const double k = trial_normalization(eps * l, mu) / std::sqrt(l);
      emit(eps, 2.0, mu, "normalization_algebraic", k * k * l * trial_lp_integral(eps * l, 2.0), mu, 1e-12);
      emit(eps, 2.0, mu, "normalization_quadrature", k * k * integrate_power(u, 2.0, rule), mu, 1e-6);
    }
  }
  ctx.write("trial_forms.csv", csv);
}

PhasePoint solve_point(const std::shared_ptr<const MetricGraph>& graph, double p, double mu, const SolverConfig& cfg) {
  const Clock::time_point t0 = Clock::now();
  const SolveOutcome out = minimize(graph, p, mu, cfg);
  return {p, mu, out.classification, out.final_energy.total, elapsed_ms(t0)};
}

// Regime checks along increasing mu for one exponent; returns the failures.
std::vector<std::string> check_regime(double p, const std::vector<PhasePoint>& row) {
  std::vector<std::string> failures;
  const std::string tag = "p=" + fmt(p) + ": ";
  int flips = 0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    const Classification c = row[k].classification;
    if (c == Classification::Inconclusive) failures.push_back(tag + "inconclusive at mu=" + fmt(row[k].mu));
    if (p < 4.0 && c != Classification::GroundState) {
      failures.push_back(tag + "expected a ground state at mu=" + fmt(row[k].mu));
    }
    if (p >= 6.0 && c == Classification::GroundState) failures.push_back(tag + "ground state reported at p=6");
    if (k > 0 && row[k - 1].classification == Classification::GroundState && c != Classification::GroundState) {
      failures.push_back(tag + "ground state lost between mu=" + fmt(row[k - 1].mu) + " and " + fmt(row[k].mu));
    }
    if (k > 0 && row[k - 1].classification == Classification::SpreadToZero && c == Classification::GroundState) ++flips;
  }
  if (p >= 4.0 && p < 6.0 && flips > 1) failures.push_back(tag + "more than one transition");
  return failures;
}

std::vector<PhasePoint> sweep(const std::shared_ptr<const MetricGraph>& graph, const std::vector<double>& ps,
                              const std::vector<double>& mus, const SolverConfig& cfg) {
  std::vector<PhasePoint> points(ps.size() * mus.size());
  parallel_for(points.size(), [&](std::size_t k) {
    points[k] = solve_point(graph, ps[k / mus.size()], mus[k % mus.size()], cfg);
  });
  std::stable_sort(points.begin(), points.end(), [](const PhasePoint& a, const PhasePoint& b) {
    return a.p != b.p ? a.p < b.p : a.mu < b.mu;
  });
  return points;
}

json runtimes(const std::vector<PhasePoint>& points) {
  json arr = json::array();
  for (const PhasePoint& pt : points) arr.push_back({{"p", pt.p}, {"mu", pt.mu}, {"runtime_ms", pt.runtime_ms}});
  return arr;
}

void run_phase_diagram(RunContext& ctx) {
  const ExperimentSpec& s = ctx.spec;
  const auto graph = make_graph(s.graph);
  const std::vector<PhasePoint> points = sweep(graph, s.p, s.mu, s.solver);
  for (std::size_t k = 0; k < points.size();) {
    std::size_t end = k;
    while (end < points.size() && points[end].p == points[k].p) ++end;
    const std::vector<PhasePoint> row(points.begin() + static_cast<std::ptrdiff_t>(k),
                                      points.begin() + static_cast<std::ptrdiff_t>(end));
    for (const std::string& f : check_regime(points[k].p, row)) ctx.fail(f);
    k = end;
  }
  // Runtimes go to the manifest so the data file is reproducible byte for byte.
  ctx.write("phase.csv", render_phase_csv(points, false));
  ctx.timings["points"] = runtimes(points);
}

void run_critical_mass(RunContext& ctx) {
  const ExperimentSpec& s = ctx.spec;
  const auto graph = make_graph(s.graph);
  std::vector<double> mus = s.mu;
  std::sort(mus.begin(), mus.end());
  const std::vector<PhasePoint> points = sweep(graph, s.p, mus, s.solver);
  ctx.write("critical_sweep.csv", render_phase_csv(points, false));
  ctx.timings["points"] = runtimes(points);

  std::string summary = "p,mu_lo,mu_hi,mu_star,rel_width,c_hat,mu_bound,transitions,result\n";
  std::string bisection = "p,step,mu,classification\n";
  for (double p : s.p) {
    std::vector<PhasePoint> row;
    for (const PhasePoint& pt : points) {
      if (pt.p == p) row.push_back(pt);
    }
    for (const std::string& f : check_regime(p, row)) ctx.fail(f);
    int transitions = 0;
    std::size_t flip = 0;
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k - 1].classification != Classification::GroundState &&
          row[k].classification == Classification::GroundState) {
        ++transitions;
        flip = k;
      }
    }
    if (transitions != 1) {
      ctx.fail("p=" + fmt(p) + ": expected exactly one SpreadToZero->GroundState transition, saw " +
               std::to_string(transitions));
      summary += csv_row({fmt(p), "", "", "", "", "", "", std::to_string(transitions), "fail"});
      continue;
    }
    const Clock::time_point t0 = Clock::now();
    const CriticalMass cm = bisect_critical_mass(graph, p, row[flip - 1].mu, row[flip].mu, s.solver, s.bracket_tol);
    ctx.timings["bisection_ms_p" + fmt(p)] = elapsed_ms(t0);
    for (std::size_t k = 0; k < cm.samples.size(); ++k) {
      bisection += csv_row({fmt(p), std::to_string(k), fmt(cm.samples[k].first),
                            std::string(to_string(cm.samples[k].second))});
    }
    const Clock::time_point t1 = Clock::now();
    AscentOptions opt;
    opt.starts = s.starts;
    opt.samples_per_edge = s.samples_per_edge;
    std::vector<GraphFunction> extra;
    if (cm.upper_state) extra.push_back(*cm.upper_state);
    const SharpConstantEstimate est =
        estimate_sharp_constant(InequalityKind::gn_interp, p, graph, s.budget, s.seed, opt, extra);
    ctx.timings["ascent_ms_p" + fmt(p)] = elapsed_ms(t1);
    const double bound = critical_mass_from_constant(p, est.c_hat);
    const double width = (cm.bracket.second - cm.bracket.first) / cm.bracket.second;
    const bool width_ok = width < 0.05;
    const bool bound_ok = cm.bracket.first >= (1.0 - s.bound_slack) * bound;
    ctx.check(width_ok, "p=" + fmt(p) + ": bracket relative width " + fmt(width) + " >= 0.05");
    ctx.check(bound_ok, "p=" + fmt(p) + ": bracket lower end " + fmt(cm.bracket.first) + " below bound " + fmt(bound));
    summary += csv_row({fmt(p), fmt(cm.bracket.first), fmt(cm.bracket.second), fmt(cm.mu_star), fmt(width),
                        fmt(est.c_hat), fmt(bound), std::to_string(transitions),
                        width_ok && bound_ok ? "pass" : "fail"});
  }
  ctx.write("critical_mass.csv", summary);
  ctx.write("critical_bisection.csv", bisection);
}

void run_unbounded(RunContext& ctx) {
  const ExperimentSpec& s = ctx.spec;
  const HoneycombLattice lat = build_honeycomb(s.graph.radius, s.graph.edge_length);
  UnboundedOptions opt;
  opt.base_samples = s.samples_per_edge;
  std::string csv = "mu,width,samples_per_edge,kinetic,potential,total,refinement_change\n";
  json regimes = json::object();
  for (double mu : s.mu) {
    std::vector<UnboundedProbe> probes;
    try {
      probes = demonstrate_unbounded(lat, mu, s.widths, opt);
    } catch (const ResolutionError& e) {
      ctx.fail("mu=" + fmt(mu) + ": " + e.what());
      continue;
    }
    bool bounded = true;
    bool decreasing = true;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const UnboundedProbe& q = probes[k];
      csv += csv_row({fmt(mu), fmt(q.width), std::to_string(q.samples_per_edge), fmt(q.energy.kinetic),
                      fmt(q.energy.potential), fmt(q.energy.total), fmt(q.refinement_change)});
      bounded = bounded && q.energy.total >= -s.bounded_tol;
      if (k > 0) decreasing = decreasing && q.energy.total < probes[k - 1].energy.total;
    }
    const bool below_floor = probes.back().energy.total < s.energy_floor;
    std::string regime = "undetermined";
    if (bounded) regime = "bounded-below";
    if (decreasing && below_floor) regime = "unbounded";
    regimes[fmt(mu)] = regime;
    ctx.check(regime != "undetermined", "mu=" + fmt(mu) + ": probes neither stay above -" + fmt(s.bounded_tol) +
                                            " nor decrease monotonically below " + fmt(s.energy_floor));
  }
  ctx.details["regimes"] = regimes;
  ctx.write("unbounded.csv", csv);
}

void run_soliton_check(RunContext& ctx) {
  const ExperimentSpec& s = ctx.spec;
  const auto graph = make_graph(s.graph);
  const MetricGraph& g = *graph;
  std::string summary = "p,mu,classification,energy,oracle_energy,rel_energy_err,profile_discrepancy,result\n";
  std::string profile = "p,mu,x,computed,analytic\n";
  for (double p : s.p) {
    for (double mu : s.mu) {
      const SolveOutcome out = minimize(graph, p, mu, s.solver, Initializer::soliton_bump);
      const SolitonParams sol = make_soliton(p, mu);
      const int n = out.state.samples_per_edge();
      double diff2 = 0.0;
      double ref2 = 0.0;
      const double sign = out.state.vertex_value(central_vertex(g)) < 0.0 ? -1.0 : 1.0;
      std::map<double, std::pair<double, double>> rows;  // x -> (computed, analytic)
      for (const Edge& e : g.edges()) {
        const double x0 = g.vertex(e.tail).position.x;
        const double dir = g.vertex(e.head).position.x > x0 ? 1.0 : -1.0;
        const double h = out.state.spacing(e.id);
        for (int k = 0; k < n; ++k) {
          const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
          const double x = x0 + dir * k * h;
          const double a = soliton_profile(sol, x);
          const double c = sign * out.state.sample(e.id, k);
          diff2 += w * (c - a) * (c - a);
          ref2 += w * a * a;
          rows.emplace(x, std::pair{c, a});
        }
      }
      for (const auto& [x, ca] : rows) profile += csv_row({fmt(p), fmt(mu), fmt(x), fmt(ca.first), fmt(ca.second)});
      const double discrepancy = std::sqrt(diff2 / ref2);
      const double oracle = soliton_energy(sol);
      const double rel = std::abs(out.final_energy.total - oracle) / std::abs(oracle);
      const bool ok = out.classification == Classification::GroundState && out.final_energy.total < 0.0 &&
                      discrepancy < s.profile_tol && rel < s.closed_form_tol;
      ctx.check(out.classification == Classification::GroundState,
                "p=" + fmt(p) + " mu=" + fmt(mu) + ": solver returned " + std::string(to_string(out.classification)));
      ctx.check(discrepancy < s.profile_tol, "p=" + fmt(p) + " mu=" + fmt(mu) + ": profile discrepancy " + fmt(discrepancy));
      ctx.check(rel < s.closed_form_tol, "p=" + fmt(p) + " mu=" + fmt(mu) + ": energy " + fmt(out.final_energy.total) +
                                             " vs oracle " + fmt(oracle));
      summary += csv_row({fmt(p), fmt(mu), std::string(to_string(out.classification)), fmt(out.final_energy.total),
                          fmt(oracle), fmt(rel), fmt(discrepancy), ok ? "pass" : "fail"});
    }
  }
  ctx.write("soliton.csv", summary);
  ctx.write("soliton_profile.csv", profile);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  RunContext ctx{spec, std::filesystem::path(spec.output), {}, json::object(), json::object()};
  std::error_code ec;
  std::filesystem::create_directories(ctx.dir, ec);
  if (ec || !std::filesystem::is_directory(ctx.dir)) throw IoError("cannot create output directory " + spec.output);
  const std::string started = utc_timestamp();
  const Clock::time_point t0 = Clock::now();
  switch (spec.kind) {
    case ExperimentKind::inequalities:
      run_inequalities(ctx);
      break;
    case ExperimentKind::trial_forms:
      run_trial_forms(ctx);
      break;
    case ExperimentKind::phase_diagram:
      run_phase_diagram(ctx);
      break;
    case ExperimentKind::critical_mass:
      run_critical_mass(ctx);
      break;
    case ExperimentKind::unbounded_p6:
      run_unbounded(ctx);
      break;
    case ExperimentKind::soliton_check:
      run_soliton_check(ctx);
      break;
  }
  ctx.timings["total_ms"] = elapsed_ms(t0);
  ctx.report.exit_code = ctx.report.failures.empty() ? 0 : 1;

  json manifest;
  manifest["kind"] = std::string(to_string(spec.kind));
  manifest["version"] = std::string(version_string());
  manifest["seed"] = spec.seed;
  manifest["started_at"] = started;
  manifest["spec"] = json::parse(spec_to_json(spec));
  manifest["files"] = ctx.report.files;
  manifest["exit_code"] = ctx.report.exit_code;
  manifest["failures"] = ctx.report.failures;
  manifest["details"] = ctx.details;
  manifest["timings"] = ctx.timings;
  const std::vector<std::string> data_files = ctx.report.files;
  ctx.write("manifest.json", manifest.dump(2) + "\n");
  ctx.report.files = data_files;
  return ctx.report;
}

}  // namespace hexnls
