/**
 * @file stepper.hpp
 * @brief BDF2 time stepping of the diffusive Cole-Cole system with a forward-Euler start.
 *
 * Discrete unknowns per level n: H^n, E^n, P^n and psi_l^n. The polarization law
 *
 *     P + tau0^alpha sum_l zeta_l psi_l = eps0 (eps_s - eps_inf) E + F3,
 *     d psi_l/dt + lambda_l psi_l = C_alpha lambda_l^(alpha-1) dP/dt,
 *
 * is eliminated pointwise, which leaves one sparse (H, E) solve per step with a matrix
 * that depends only on the mesh, tau and the material.
 */

#ifndef COLECOLE_STEPPER_HPP
#define COLECOLE_STEPPER_HPP

#include "colecole/dg.hpp"
#include "colecole/diagnostics.hpp"
#include "colecole/material.hpp"
#include "colecole/quadopt.hpp"
#include "colecole/state.hpp"

#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace colecole {

using SpaceTimeFunction = std::function<double(double x, double t)>;

/// External sources; an empty function stands for the zero source.
struct SourceSet {
    SpaceTimeFunction F1;
    SpaceTimeFunction F2;
    SpaceTimeFunction F3;

    bool isZero() const { return !F1 && !F2 && !F3; }
};

/// L2 projection of f(., t); zero field when f is empty.
DgField project_source(const SpaceTimeFunction& f, double t, const Mesh1D& mesh, int degree);

struct Bdf2Coefficients {
    double c1;
    double c2;
    double c3;
    double cAlpha;
};

/// (3/(2 tau), -2/tau, 1/(2 tau), sin(pi alpha)/pi).
Bdf2Coefficients bdf2_coefficients(double tau, double alpha);

/**
 * @brief Factored implicit (H, E) operator
 *        [ mu0 c1 I, 0 ; 0, gammaE c1 I ] - DgOperators::matrix().
 */
class HeSystem {
public:
    HeSystem(const DgOperators& ops, double c1, double gammaE);

    /// Solves for the stacked [H; E] coefficients.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

private:
    Eigen::SparseMatrix<double> matrix_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

/// Everything that stays fixed for a given (mesh, degree, params, quadrature, tau).
class BdfWorkspace {
public:
    BdfWorkspace(const DgOperators& ops, const DiffusiveQuadrature& quad, double tau);

    const DgOperators& ops() const { return ops_; }
    const MaterialParams& params() const { return ops_.params(); }
    const DiffusiveQuadrature& quad() const { return quad_; }
    double tau() const { return tau_; }
    const Bdf2Coefficients& coeffs() const { return coeffs_; }
    /// 1 + tau0^alpha c1 C_alpha sum_l zeta_l lambda_l^(alpha-1) / (c1 + lambda_l)
    double kappa() const { return kappa_; }
    /// C_alpha lambda_l^(alpha-1)
    double drive(std::size_t l) const { return drive_[l]; }
    const HeSystem& system() const { return system_; }

private:
    DgOperators ops_;
    DiffusiveQuadrature quad_;
    double tau_;
    Bdf2Coefficients coeffs_;
    std::vector<double> drive_;
    double kappa_;
    HeSystem system_;
};

/// psi_l^n = (C_alpha lambda^(alpha-1) (c1 P^n + c2 P^(n-1) + c3 P^(n-2)) - c2 psi^(n-1) - c3 psi^(n-2)) / (c1 + lambda)
DgField eliminate_psi(const DgField& Pn, const DgField& Pnm1, const DgField& Pnm2, const DgField& psiNm1,
                      const DgField& psiNm2, const BdfWorkspace& ws, std::size_t l);

/// P^n from E^n and the two previous levels of P and psi.
DgField polarization_solve(const DgField& En, const DgField& Pnm1, const DgField& Pnm2,
                           const std::vector<DgField>& psiNm1, const std::vector<DgField>& psiNm2, const DgField& F3n,
                           const BdfWorkspace& ws);

/**
 * @brief Level 1 from level 0 by forward Euler.
 *
 * H, E and psi use the spatial operators, sources and relaxation at level 0. The jump of
 * P over the step is fixed by the polarization law at level 1, so the increment of P
 * enters the E and psi updates; this is a pointwise scalar solve, no global system.
 */
SimState bootstrap_first_step(const SimState& s0, const BdfWorkspace& ws, const SourceSet& sources);

/// Level n from levels n-1 and n-2 at time tn.
SimState bdf2_step(const SimState& nm1, const SimState& nm2, const BdfWorkspace& ws, const SourceSet& sources,
                   double tn);

/// Residual L2 norms of the four discrete equations, each relative to its largest term.
struct StepResiduals {
    double h = 0.0;
    double e = 0.0;
    double p = 0.0;
    double psi = 0.0;

    double max() const;
};

StepResiduals bdf2_residuals(const SimState& n, const SimState& nm1, const SimState& nm2, const BdfWorkspace& ws,
                             const SourceSet& sources);

struct SimulationConfig {
    MaterialParams params = MaterialParams::unit(0.5);
    Mesh1D mesh{0.0, 2.0, 10};
    int degree = 1;
    double tau = 1e-2;
    double finalTime = 1.0;
    /// Required by the fast solver, ignored by the direct one.
    std::optional<DiffusiveQuadrature> quad;
    SourceSet sources;
    /// Initial E and H; empty means zero. Projected with project_initial_EH.
    ScalarFunction E0;
    ScalarFunction H0;
    /// Energy sample every this many steps (plus t = 0 and the final step); 0 disables.
    int sampleEvery = 0;
    /// Check the discrete residuals after every BDF2 step and throw above this bound; 0 disables.
    double residualGate = 0.0;
};

struct SimulationResult {
    SimState final;
    std::vector<EnergySample> energy;
    long steps = 0;
    double wallSeconds = 0.0;
    /// Largest residual seen when the gate is enabled.
    double maxResidual = 0.0;
    std::vector<std::string> warnings;
};

/// Number of steps covering finalTime; a warning is recorded when tau does not divide it.
long step_count(double finalTime, double tau, std::vector<std::string>& warnings);

/// Initial state of a configuration with `modes` auxiliary fields.
SimState initial_state(const SimulationConfig& config, std::size_t modes);

SimulationResult run_simulation(const SimulationConfig& config);

} // namespace colecole

#endif // COLECOLE_STEPPER_HPP
