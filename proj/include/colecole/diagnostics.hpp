/**
 * @file diagnostics.hpp
 * @brief Energy functionals, dispersion relations, error norms and convergence tables.
 */

#ifndef COLECOLE_DIAGNOSTICS_HPP
#define COLECOLE_DIAGNOSTICS_HPP

#include "colecole/dg.hpp"
#include "colecole/material.hpp"
#include "colecole/quadopt.hpp"
#include "colecole/state.hpp"

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

namespace colecole {

struct EnergySample {
    double t = 0.0;
    double e1 = 0.0;
    double e2Sharp = 0.0;
    double total = 0.0;
    /// Instantaneous rate dE#/dt of the semi-discrete system at this state (<= 0).
    double dissipation = 0.0;
};

/// 1/2 int eps0 eps_inf E^2 + mu0 H^2 + P^2 / (eps0 (eps_s - eps_inf)) dx
double energy_classical(const SimState& state, const MaterialParams& params);

/// pi / (2 sin(pi alpha)) int tau0^alpha / (eps0 (eps_s - eps_inf)) sum_l zeta_l lambda_l^(1-alpha) psi_l^2 dx
double energy_diffusive_sharp(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad);

/// -pi / sin(pi alpha) int tau0^alpha / (eps0 (eps_s - eps_inf)) sum_l zeta_l lambda_l^(2-alpha) psi_l^2 dx
double diffusive_dissipation(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad);

/// -sum over faces of 1/2 (Z [H]^2 + [E]^2 / Z)
double face_dissipation_total(const SimState& state, const MaterialParams& params);

/// Sum of the two rates above; nonpositive for every feasible quadrature.
double dissipation_rate(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad);

EnergySample energy_sample(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad);

struct DispersionSample {
    double omega = 0.0;
    std::complex<double> k;
    double phaseVelocity = 0.0;
    double attenuation = 0.0;
};

/// Plane-wave data from k^2; principal root so Re(k) >= 0.
DispersionSample dispersion_from_k2(double omega, std::complex<double> k2);

/// k^2 = (mu0 eps0 eps_inf + mu0 eps0 (eps_s - eps_inf) / (1 + Q)) omega^2 with Q = (i omega tau0)^alpha.
DispersionSample dispersion_exact(double omega, const MaterialParams& params);
/// Same with an explicit order in (0, 1]; alpha = 1 is the Debye model.
DispersionSample dispersion_exact(double omega, const MaterialParams& params, double alpha);
/// Debye closed form, Q = i omega tau0.
DispersionSample dispersion_debye(double omega, const MaterialParams& params);
/// Q replaced by tau0^alpha times the quadrature symbol.
DispersionSample dispersion_approx(double omega, const MaterialParams& params, const DiffusiveQuadrature& quad);

/// sqrt of the element-wise (k+3)-point Gauss integral of (field - exact)^2.
double l2_error(const DgField& field, const ScalarFunction& exact);

struct ConvergenceRow {
    int cells = 0;
    double errE = 0.0;
    double errH = 0.0;
    double errP = 0.0;
    /// log2(err(previous) / err(this)); NaN on the first row.
    double orderE = 0.0;
    double orderH = 0.0;
    double orderP = 0.0;
    /// Set when errors sit at the rounding floor and orders carry no information.
    bool atRoundingFloor = false;
};

/// Fills orders from consecutive rows of a refinement sequence (cells doubling).
void compute_orders(std::vector<ConvergenceRow>& rows);

void write_energy_csv(std::ostream& os, const std::vector<EnergySample>& samples);
void write_dispersion_csv(std::ostream& os, const std::vector<DispersionSample>& samples);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

} // namespace colecole

#endif // COLECOLE_DIAGNOSTICS_HPP
