// hexnls <kind> --config spec.json [--p ..] [--mu ..] [--radius R] [--seed S] [--out DIR]
//
// Exit codes: 0 every assertion passed, 1 an assertion failed, 2 usage or I/O.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hexnls/error.hpp"
#include "hexnls/experiments.hpp"

namespace {

constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hexnls::IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state experiments for the NLS energy on honeycomb metric graphs"};
  app.set_version_flag("--version", std::string(hexnls::version_string()));

  std::string kind;
  std::string config;
  std::vector<double> p;
  std::vector<double> mu;
  int radius = 0;
  std::uint64_t seed = 0;
  std::string out;

  app.add_option("kind", kind,
                 "inequalities | trial-forms | phase-diagram | critical-mass | unbounded-p6 | soliton-check")
      ->required();
  app.add_option("--config", config, "JSON experiment spec")->required()->check(CLI::ExistingFile);
  auto* p_opt = app.add_option("--p", p, "exponents (replaces the spec list)")->delimiter(',');
  auto* mu_opt = app.add_option("--mu", mu, "masses (replaces the spec list)")->delimiter(',');
  auto* r_opt = app.add_option("--radius", radius, "honeycomb truncation radius")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* out_opt = app.add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    const hexnls::ExperimentKind requested = hexnls::experiment_kind_from_string(kind);
    hexnls::ExperimentSpec spec = hexnls::spec_from_json(read_file(config));
    if (spec.kind != requested) {
      std::cerr << "hexnls: " << config << " describes a " << hexnls::to_string(spec.kind) << " run, not " << kind
                << "\n";
      return kUsage;
    }
    hexnls::SpecOverrides overrides;
    if (*p_opt) overrides.p = p;
    if (*mu_opt) overrides.mu = mu;
    if (*r_opt) overrides.radius = radius;
    if (*seed_opt) overrides.seed = seed;
    if (*out_opt) overrides.output = out;
    hexnls::apply_overrides(spec, overrides);

    const hexnls::RunReport report = hexnls::run_experiment(spec);
    for (const std::string& f : report.files) std::cout << spec.output << "/" << f << "\n";
    if (report.exit_code != 0) {
      std::cerr << "hexnls: " << report.failures.size() << " assertion(s) failed\n";
      for (const std::string& f : report.failures) std::cerr << "  " << f << "\n";
    }
    return report.exit_code;
  } catch (const hexnls::InvalidParameter& e) {
    std::cerr << "hexnls: " << e.what() << "\n";
    return kUsage;
  } catch (const hexnls::IoError& e) {
    std::cerr << "hexnls: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "hexnls: " << e.what() << "\n";
    return 1;
  }
}
