#pragma once

#include "hexnls/graph_function.hpp"
#include "hexnls/honeycomb.hpp"

namespace hexnls {

/// Line soliton of mass mu: phi_mu(x) = mu^alpha * phi_1(mu^beta * x) with
/// prototype phi_1(x) = amplitude * sech(width * x)^(2/(p-2)) of unit mass.
/// For p = 4 the prototype is the plain sech profile.
struct SolitonParams {
  double p = 4.0;
  double mu = 1.0;
  double alpha = 1.0;  // 2/(6-p)
  double beta = 1.0;   // (p-2)/(6-p)
  double amplitude = 0.0;
  double width = 0.0;
  double frequency = 0.0;  // omega of the prototype: phi'' - omega phi + phi^(p-1) = 0
};

/// Fixes the prototype constants from the stationarity relations of the 1D
/// NLS and the unit-mass condition (quadrature plus root finding).
SolitonParams make_soliton(double p, double mu);

double soliton_profile(const SolitonParams& params, double x);
double soliton_derivative(const SolitonParams& params, double x);

/// Energy 1/2 int phi'^2 - 1/p int phi^p of the soliton on the real line, by
/// adaptive quadrature.
double soliton_energy(const SolitonParams& params);

/// Closed-form integrals of the exponential competitor u_eps on the unit-edge
/// hexagonal grid.
double trial_lp_integral(double eps, double p);
double trial_kinetic_integral(double eps);
/// k_eps such that k_eps^2 * trial_lp_integral(eps, 2) == mu.
double trial_normalization(double eps, double mu);

struct TrialEnergyTerms {
  double kinetic = 0.0;    // 1/2 k^2 int |u'|^2
  double potential = 0.0;  // 1/p k^p int |u|^p
  double total = 0.0;
};
TrialEnergyTerms trial_energy_terms(double eps, double p, double mu);
double trial_energy(double eps, double p, double mu);

/// (p / (2 C))^(2/(p-2)), the mass below which the interpolated
/// Gagliardo-Nirenberg bound with constant C forces nonnegative energy.
double critical_mass_from_constant(double p, double c_interp);

/// u_eps sampled on a lattice: exp(-eps * l * (|offset| + |path|)) at vertices,
/// exponential in the arclength along every edge.
GraphFunction trial_function(const HoneycombLattice& lat, double eps, int samples_per_edge = kDefaultSamplesPerEdge);

/// Smallest truncation radius whose neglected tail is negligible at 1e-3
/// closed-form comparisons: ceil(10 / eps).
int trial_truncation_radius(double eps);

}  // namespace hexnls
