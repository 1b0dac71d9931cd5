#include "hexnls/analytic_forms.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdlib>

#include "hexnls/error.hpp"

namespace hexnls {

namespace {

void require_positive_eps(double eps, const char* op) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParameter(std::string(op) + ": eps must be positive");
}

// (e^t + 1) / (e^t - 1) without cancellation for small t.
double coth_half(double t) {
  const double em1 = std::expm1(t);
  return (em1 + 2.0) / em1;
}

}  // namespace

SolitonParams make_soliton(double p, double mu) {
  if (!(p > 2.0 && p < 6.0)) throw InvalidParameter("make_soliton: p must lie in (2, 6)");
  if (!(mu > 0.0)) throw InvalidParameter("make_soliton: mu must be positive");
  SolitonParams s;
  s.p = p;
  s.mu = mu;
  s.alpha = 2.0 / (6.0 - p);
  s.beta = (p - 2.0) / (6.0 - p);

  // phi = A sech(b x)^gamma solves phi'' - omega phi + phi^(p-1) = 0 when
  // A^(p-2) = p omega / 2 and b = (p-2) sqrt(omega) / 2.
  const double gamma = 2.0 / (p - 2.0);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double half_integral =
      integrator.integrate([gamma](double y) { return std::pow(1.0 / std::cosh(y), 2.0 * gamma); });
  const double sech_integral = 2.0 * half_integral;
  const auto amplitude = [p](double omega) { return std::pow(0.5 * p * omega, 1.0 / (p - 2.0)); };
  const auto width = [p](double omega) { return 0.5 * (p - 2.0) * std::sqrt(omega); };
  const auto log_mass = [&](double log_omega) {
    const double omega = std::exp(log_omega);
    const double a = amplitude(omega);
    return std::log(a * a * sech_integral / width(omega));
  };
  // log mass is strictly increasing in log omega for p < 6.
  double lo = -5.0;
  double hi = 5.0;
  while (log_mass(lo) > 0.0) lo -= 5.0;
  while (log_mass(hi) < 0.0) hi += 5.0;
  boost::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(log_mass, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                      iterations);
  s.frequency = std::exp(0.5 * (root.first + root.second));
  s.amplitude = amplitude(s.frequency);
  s.width = width(s.frequency);
  return s;
}

double soliton_profile(const SolitonParams& params, double x) {
  if (!(params.p > 2.0 && params.p < 6.0)) throw InvalidParameter("soliton_profile: p must lie in (2, 6)");
  const double gamma = 2.0 / (params.p - 2.0);
  const double scaled = params.width * std::pow(params.mu, params.beta) * x;
  return std::pow(params.mu, params.alpha) * params.amplitude * std::pow(1.0 / std::cosh(scaled), gamma);
}

double soliton_derivative(const SolitonParams& params, double x) {
  if (!(params.p > 2.0 && params.p < 6.0)) throw InvalidParameter("soliton_derivative: p must lie in (2, 6)");
  const double gamma = 2.0 / (params.p - 2.0);
  const double b = params.width * std::pow(params.mu, params.beta);
  return -gamma * b * std::tanh(b * x) * soliton_profile(params, x);
}

double soliton_energy(const SolitonParams& params) {
  boost::math::quadrature::exp_sinh<double> integrator;
  const double p = params.p;
  // Both integrands are even in x.
  const double kinetic = 2.0 * integrator.integrate([&](double x) {
    const double d = soliton_derivative(params, x);
    return d * d;
  });
  const double potential = 2.0 * integrator.integrate([&](double x) { return std::pow(soliton_profile(params, x), p); });
  return 0.5 * kinetic - potential / p;
}

double trial_lp_integral(double eps, double p) {
  require_positive_eps(eps, "trial_lp_integral");
  if (!(p >= 2.0)) throw InvalidParameter("trial_lp_integral: p must be >= 2");
  return 3.0 * coth_half(p * eps) / (p * eps);
}

double trial_kinetic_integral(double eps) {
  require_positive_eps(eps, "trial_kinetic_integral");
  return 1.5 * eps * coth_half(2.0 * eps);
}

double trial_normalization(double eps, double mu) {
  require_positive_eps(eps, "trial_normalization");
  if (!(mu > 0.0)) throw InvalidParameter("trial_normalization: mu must be positive");
  return std::sqrt(2.0 * eps * mu / (3.0 * coth_half(2.0 * eps)));
}

TrialEnergyTerms trial_energy_terms(double eps, double p, double mu) {
  if (!(p > 2.0 && p < 6.0)) throw InvalidParameter("trial_energy: p must lie in (2, 6)");
  const double k = trial_normalization(eps, mu);
  TrialEnergyTerms t;
  t.kinetic = 0.5 * k * k * trial_kinetic_integral(eps);
  t.potential = std::pow(k, p) * trial_lp_integral(eps, p) / p;
  t.total = t.kinetic - t.potential;
  return t;
}

double trial_energy(double eps, double p, double mu) { return trial_energy_terms(eps, p, mu).total; }

double critical_mass_from_constant(double p, double c_interp) {
  if (!(p >= 4.0 && p <= 6.0)) throw InvalidParameter("critical_mass_from_constant: p must lie in [4, 6]");
  if (!(c_interp > 0.0)) throw InvalidParameter("critical_mass_from_constant: constant must be positive");
  return std::pow(p / (2.0 * c_interp), 2.0 / (p - 2.0));
}

GraphFunction trial_function(const HoneycombLattice& lat, double eps, int samples_per_edge) {
  require_positive_eps(eps, "trial_function");
  const double l = lat.edge_length;
  const auto level = [&lat](int v) {
    const LatticeSite s = lat.sites[static_cast<std::size_t>(v)];
    return static_cast<double>(std::abs(s.offset) + std::abs(s.path));
  };
  const MetricGraph& g = *lat.graph;
  return GraphFunction::from_callables(
      lat.graph, samples_per_edge, [&](int v) { return std::exp(-eps * l * level(v)); },
      [&](int e, double x) {
        const Edge& edge = g.edge(e);
        const double t = x / edge.length;
        return std::exp(-eps * l * ((1.0 - t) * level(edge.tail) + t * level(edge.head)));
      });
}

int trial_truncation_radius(double eps) {
  require_positive_eps(eps, "trial_truncation_radius");
  return static_cast<int>(std::ceil(10.0 / eps - 1e-9));
}

}  // namespace hexnls
