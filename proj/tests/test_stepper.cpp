#include "colecole/errors.hpp"
#include "colecole/experiments.hpp"
#include "colecole/manufactured.hpp"
#include "colecole/stepper.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace colecole;

namespace {

const DiffusiveQuadrature& fitted_half()
{
    static const DiffusiveQuadrature q = fit_quadrature(0.5, 20, FrequencyBand(0.5, 5.0, 40)).quadrature;
    return q;
}

SimState random_state(const Mesh1D& mesh, int k, std::size_t modes, std::mt19937_64& gen, double t)
{
    SimState s = SimState::zero(mesh, k, modes);
    s.t = t;
    s.H = test::random_field(mesh, k, gen);
    s.E = test::random_field(mesh, k, gen);
    s.P = test::random_field(mesh, k, gen);
    for (DgField& p : s.psi) {
        p = test::random_field(mesh, k, gen);
    }
    return s;
}

double rel_diff(const DgField& a, const DgField& b)
{
    const double scale = std::max(a.coeffs().norm(), b.coeffs().norm());
    return scale > 0.0 ? (a.coeffs() - b.coeffs()).norm() / scale : 0.0;
}

} // namespace

TEST(Bdf2Coefficients, Values)
{
    const Bdf2Coefficients c = bdf2_coefficients(0.5, 0.3);
    EXPECT_DOUBLE_EQ(c.c1, 3.0);
    EXPECT_DOUBLE_EQ(c.c2, -4.0);
    EXPECT_DOUBLE_EQ(c.c3, 1.0);
    EXPECT_NEAR(bdf2_coefficients(1.0, 0.5).cAlpha, 1.0 / std::numbers::pi, 1e-16);
    for (double tau : {1e-4, 0.013, 2.0}) {
        const Bdf2Coefficients d = bdf2_coefficients(tau, 0.5);
        EXPECT_NEAR(d.c1 + d.c2 + d.c3, 0.0, 1e-12 * d.c1);
    }
    EXPECT_THROW(bdf2_coefficients(0.0, 0.5), DomainError);
    EXPECT_THROW(bdf2_coefficients(-1.0, 0.5), DomainError);
}

TEST(BdfWorkspace, KappaAboveOneAndMatchesFormula)
{
    auto gen = test::rng(20);
    const Mesh1D mesh(0.0, 2.0, 4);
    std::uniform_real_distribution<double> a(0.05, 0.95), lt(-5.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = a(gen);
        const MaterialParams p(1.0, 2.0, 4.0, 1.5, 0.3, alpha);
        const DiffusiveQuadrature q = test::random_quadrature(1 + trial % 6, alpha, gen);
        const double tau = std::pow(10.0, lt(gen));
        const BdfWorkspace ws(DgOperators(mesh, 1, p), q, tau);
        double sum = 0.0;
        const double c1 = 1.5 / tau;
        for (std::size_t l = 0; l < q.size(); ++l) {
            sum += q.weights()[l] * std::pow(q.abscissae()[l], alpha - 1.0) / (c1 + q.abscissae()[l]);
        }
        const double expected = 1.0 + std::pow(0.3, alpha) * c1 * std::sin(std::numbers::pi * alpha) /
                                          std::numbers::pi * sum;
        EXPECT_GT(ws.kappa(), 1.0);
        EXPECT_NEAR(ws.kappa(), expected, 1e-12 * expected);
    }
}

TEST(BdfWorkspace, RejectsQuadratureForOtherOrder)
{
    const DgOperators ops(Mesh1D(0.0, 2.0, 4), 1, MaterialParams::unit(0.5));
    EXPECT_THROW(BdfWorkspace(ops, gauss_jacobi_init(3, 0.3), 0.01), DomainError);
}

TEST(EliminatePsi, ZeroHistoryGivesZero)
{
    const Mesh1D mesh(0.0, 2.0, 4);
    const BdfWorkspace ws(DgOperators(mesh, 1, MaterialParams::unit(0.5)), fitted_half(), 0.01);
    const DgField z(mesh, 1);
    EXPECT_EQ(eliminate_psi(z, z, z, z, z, ws, 3).coeffs().cwiseAbs().maxCoeff(), 0.0);
}

TEST(EliminatePsi, SatisfiesDefiningEquation)
{
    auto gen = test::rng(21);
    const Mesh1D mesh(0.0, 2.0, 5);
    const BdfWorkspace ws(DgOperators(mesh, 2, MaterialParams::unit(0.5)), fitted_half(), 0.004);
    const Bdf2Coefficients& c = ws.coeffs();
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t l = trial % ws.quad().size();
        const double lambda = ws.quad().abscissae()[l];
        const DgField P0 = test::random_field(mesh, 2, gen), P1 = test::random_field(mesh, 2, gen),
                      P2 = test::random_field(mesh, 2, gen), s1 = test::random_field(mesh, 2, gen),
                      s2 = test::random_field(mesh, 2, gen);
        const DgField psi = eliminate_psi(P0, P1, P2, s1, s2, ws, l);
        const Eigen::VectorXd lhs = c.c1 * psi.coeffs() + c.c2 * s1.coeffs() + c.c3 * s2.coeffs();
        const Eigen::VectorXd rhs =
            -lambda * psi.coeffs() + c.cAlpha * std::pow(lambda, -0.5) *
                                         (c.c1 * P0.coeffs() + c.c2 * P1.coeffs() + c.c3 * P2.coeffs());
        EXPECT_LT((lhs - rhs).norm(), 1e-12 * std::max({lhs.norm(), rhs.norm(), 1.0}));
    }
}

TEST(EliminatePsi, SteadyPolarizationRelaxesToZero)
{
    const Mesh1D mesh(0.0, 2.0, 2);
    const DiffusiveQuadrature q({1.0}, {1.0}, 0.5);
    const BdfWorkspace ws(DgOperators(mesh, 1, MaterialParams::unit(0.5)), q, 0.1);
    DgField P = l2_project([](double) { return 1.0; }, mesh, 1);
    DgField older = 0.3 * P;
    DgField old = 0.7 * P;
    for (int n = 0; n < 500; ++n) {
        DgField next = eliminate_psi(P, P, P, old, older, ws, 0);
        older = std::move(old);
        old = std::move(next);
    }
    EXPECT_LT(old.coeffs().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PolarizationSolve, ZeroInputsGiveZero)
{
    const Mesh1D mesh(0.0, 2.0, 4);
    const BdfWorkspace ws(DgOperators(mesh, 1, MaterialParams::unit(0.5)), fitted_half(), 0.01);
    const DgField z(mesh, 1);
    const std::vector<DgField> hist(ws.quad().size(), z);
    EXPECT_EQ(polarization_solve(z, z, z, hist, hist, z, ws).coeffs().cwiseAbs().maxCoeff(), 0.0);
}

TEST(PolarizationSolve, UnitStrengthZeroHistoryIsScaledField)
{
    auto gen = test::rng(22);
    const Mesh1D mesh(0.0, 2.0, 4);
    const BdfWorkspace ws(DgOperators(mesh, 1, MaterialParams::unit(0.5)), fitted_half(), 0.01);
    const DgField z(mesh, 1);
    const std::vector<DgField> hist(ws.quad().size(), z);
    const DgField E = test::random_field(mesh, 1, gen);
    const DgField P = polarization_solve(E, z, z, hist, hist, z, ws);
    EXPECT_LT((P.coeffs() - E.coeffs() / ws.kappa()).norm(), 1e-14 * E.coeffs().norm());
}

TEST(PolarizationSolve, AgreesWithDenseCoupledSolve)
{
    auto gen = test::rng(23);
    const Mesh1D mesh(0.0, 1.0, 2);
    const MaterialParams p(1.0, 2.0, 3.5, 1.0, 0.7, 0.4);
    const DiffusiveQuadrature q({0.8, 2.5}, {0.3, 7.0}, 0.4);
    const double tau = 0.05;
    const BdfWorkspace ws(DgOperators(mesh, 1, p), q, tau);
    const Bdf2Coefficients& c = ws.coeffs();
    const double ta = std::pow(0.7, 0.4);
    for (int trial = 0; trial < 20; ++trial) {
        const DgField E = test::random_field(mesh, 1, gen), P1 = test::random_field(mesh, 1, gen),
                      P2 = test::random_field(mesh, 1, gen), F3 = test::random_field(mesh, 1, gen);
        const std::vector<DgField> s1{test::random_field(mesh, 1, gen), test::random_field(mesh, 1, gen)};
        const std::vector<DgField> s2{test::random_field(mesh, 1, gen), test::random_field(mesh, 1, gen)};
        const DgField P = polarization_solve(E, P1, P2, s1, s2, F3, ws);
        for (Eigen::Index i = 0; i < E.size(); ++i) {
            // Unknowns (P, psi_1, psi_2) of one coefficient.
            Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
            Eigen::Vector3d b;
            A(0, 0) = 1.0;
            A(0, 1) = ta * 0.8;
            A(0, 2) = ta * 2.5;
            b(0) = p.deltaEps() * E.coeffs()(i) + F3.coeffs()(i);
            for (int l = 0; l < 2; ++l) {
                const double lambda = q.abscissae()[l];
                const double drive = c.cAlpha * std::pow(lambda, -0.6);
                A(1 + l, 1 + l) = c.c1 + lambda;
                A(1 + l, 0) = -drive * c.c1;
                b(1 + l) = drive * (c.c2 * P1.coeffs()(i) + c.c3 * P2.coeffs()(i)) - c.c2 * s1[l].coeffs()(i) -
                           c.c3 * s2[l].coeffs()(i);
            }
            const Eigen::Vector3d x = A.fullPivLu().solve(b);
            EXPECT_NEAR(P.coeffs()(i), x(0), 1e-12 * std::max(1.0, std::abs(x(0))));
            for (int l = 0; l < 2; ++l) {
                const DgField psi = eliminate_psi(P, P1, P2, s1[l], s2[l], ws, l);
                EXPECT_NEAR(psi.coeffs()(i), x(1 + l), 1e-12 * std::max(1.0, std::abs(x(1 + l))));
            }
        }
    }
}

TEST(Bootstrap, ZeroDataStaysZero)
{
    const Mesh1D mesh(0.0, 2.0, 6);
    const BdfWorkspace ws(DgOperators(mesh, 2, MaterialParams::unit(0.5)), fitted_half(), 0.01);
    const SimState s1 = bootstrap_first_step(SimState::zero(mesh, 2, ws.quad().size()), ws, {});
    EXPECT_DOUBLE_EQ(s1.t, 0.01);
    EXPECT_EQ(s1.H.coeffs().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s1.E.coeffs().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s1.P.coeffs().cwiseAbs().maxCoeff(), 0.0);
    for (const DgField& psi : s1.psi) {
        EXPECT_EQ(psi.coeffs().cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Bootstrap, MagneticDataOnlyDrivesElectricThroughOperator)
{
    const Mesh1D mesh(0.0, 2.0, 4);
    const MaterialParams p(1.0, 2.0, 3.0, 1.5, 1.0, 0.5);
    const DiffusiveQuadrature q({0.5, 2.0}, {0.5, 4.0}, 0.5);
    const double tau = 0.02;
    const DgOperators ops(mesh, 1, p);
    const BdfWorkspace ws(ops, q, tau);
    SimState s0 = SimState::zero(mesh, 1, q.size());
    s0.H(1, 0) = 1.0;
    s0.H(1, 1) = -0.5;
    const SimState s1 = bootstrap_first_step(s0, ws, {});

    const DgField eStar = (tau / p.eps()) * ops.derivativeH(s0.H, s0.E);
    const double cAlpha = 1.0 / std::numbers::pi;
    const double driveSum = 0.5 * cAlpha * std::pow(0.5, -0.5) + 2.0 * cAlpha * std::pow(4.0, -0.5);
    const double denom = 1.0 + driveSum + p.deltaEps() / p.eps();
    const Eigen::VectorXd dP = p.deltaEps() * eStar.coeffs() / denom;
    EXPECT_LT((s1.E.coeffs() - (eStar.coeffs() - dP / p.eps())).norm(), 1e-14);
    EXPECT_LT((s1.P.coeffs() - dP).norm(), 1e-14);
    EXPECT_LT((s1.psi[1].coeffs() - cAlpha * 0.5 * dP).norm(), 1e-14);
    const DgField hExpected = s0.H + (tau / p.mu0()) * ops.derivativeE(s0.H, s0.E);
    EXPECT_LT((s1.H.coeffs() - hExpected.coeffs()).norm(), 1e-14);
    // The polarization law holds exactly at level 1.
    const Eigen::VectorXd law = s1.P.coeffs() + 0.5 * s1.psi[0].coeffs() + 2.0 * s1.psi[1].coeffs() -
                                p.deltaEps() * s1.E.coeffs();
    EXPECT_LT(law.norm(), 1e-14);
}

TEST(Bootstrap, LocalErrorIsSecondOrderForSmoothData)
{
    // A finite quadrature turns the model into a smooth ODE system; from data satisfying the
    // polarization law the Euler step has a local error O(tau^2). The reference is a fine
    // BDF2 run to t = tau.
    const Mesh1D mesh(0.0, 2.0, 20);
    const MaterialParams p = MaterialParams::unit(0.5);
    const DiffusiveQuadrature q = fit_quadrature(0.5, 5, FrequencyBand(0.5, 5.0, 10)).quadrature;
    const DgOperators ops(mesh, 1, p);
    auto [E0, H0] = project_initial_EH(energy_initial_E, energy_initial_H, p, mesh, 1);
    SimState s0 = SimState::initial(H0, E0, q.size());
    s0.P = p.deltaEps() * s0.E;
    const auto reference = [&](double dt, int steps) {
        const BdfWorkspace ws(ops, q, dt);
        SimState older = s0;
        SimState old = bootstrap_first_step(s0, ws, {});
        for (int n = 2; n <= steps; ++n) {
            SimState next = bdf2_step(old, older, ws, {}, n * dt);
            older = std::move(old);
            old = std::move(next);
        }
        return old;
    };
    std::vector<double> errors;
    for (double tau : {2e-3, 1e-3}) {
        const SimState s1 = bootstrap_first_step(s0, BdfWorkspace(ops, q, tau), {});
        const SimState ref = reference(tau / 64, 64);
        errors.push_back(std::sqrt((s1.E - ref.E).squaredNorm() + (s1.H - ref.H).squaredNorm() +
                                   (s1.P - ref.P).squaredNorm()));
    }
    EXPECT_NEAR(errors[0] / errors[1], 4.0, 0.4);
}

TEST(Bootstrap, ManufacturedStartError)
{
    // H is smooth in t; E carries the t^(2-alpha) term of the exact solution, which an Euler
    // step started at rest cannot resolve.
    const double alpha = 0.5;
    const ManufacturedProblem mp(alpha);
    const Mesh1D mesh(0.0, 2.0, 40);
    const DgOperators ops(mesh, 2, mp.params());
    std::vector<double> eH, eE;
    for (double tau : {1e-3, 5e-4}) {
        const BdfWorkspace ws(ops, fitted_half(), tau);
        const SimState s1 = bootstrap_first_step(SimState::zero(mesh, 2, ws.quad().size()), ws, mp.sources());
        eH.push_back(l2_error(s1.H, mp.exactH(tau)));
        eE.push_back(l2_error(s1.E, mp.exactE(tau)));
    }
    EXPECT_NEAR(eH[0] / eH[1], 4.0, 0.2);
    EXPECT_NEAR(eE[0] / eE[1], std::pow(2.0, 2.0 - alpha), 0.15);
}

TEST(Bdf2Step, ZeroStateStaysZero)
{
    const Mesh1D mesh(0.0, 2.0, 6);
    const BdfWorkspace ws(DgOperators(mesh, 1, MaterialParams::unit(0.5)), fitted_half(), 0.01);
    const SimState z = SimState::zero(mesh, 1, ws.quad().size());
    const SimState s = bdf2_step(z, z, ws, {}, 0.02);
    EXPECT_EQ(s.H.coeffs().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.E.coeffs().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.P.coeffs().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Bdf2Step, DiscreteEquationsHoldForRandomHistories)
{
    auto gen = test::rng(24);
    const ManufacturedProblem mp(0.5);
    for (int k = 1; k <= 2; ++k) {
        const Mesh1D mesh(0.0, 2.0, 8);
        const MaterialParams p(1.0, 2.0, 6.0, 0.8, 0.5, 0.5);
        const BdfWorkspace ws(DgOperators(mesh, k, p), fitted_half(), 0.003);
        SourceSet sources = mp.sources();
        sources.F3 = [](double x, double t) { return std::sin(x + t); };
        for (int trial = 0; trial < 10; ++trial) {
            const SimState nm2 = random_state(mesh, k, ws.quad().size(), gen, 0.1);
            const SimState nm1 = random_state(mesh, k, ws.quad().size(), gen, 0.103);
            const SimState n = bdf2_step(nm1, nm2, ws, sources, 0.106);
            const StepResiduals r = bdf2_residuals(n, nm1, nm2, ws, sources);
            EXPECT_LT(r.max(), 1e-10) << "h=" << r.h << " e=" << r.e << " p=" << r.p << " psi=" << r.psi;
        }
    }
}

TEST(Bdf2Step, ResponseIsLinearInSources)
{
    const Mesh1D mesh(0.0, 2.0, 8);
    const BdfWorkspace ws(DgOperators(mesh, 2, MaterialParams::unit(0.5)), fitted_half(), 0.01);
    const SimState z = SimState::zero(mesh, 2, ws.quad().size());
    const ManufacturedProblem mp(0.5);
    SourceSet once = mp.sources();
    once.F3 = [](double x, double t) { return std::cos(3.0 * x) * t; };
    SourceSet twice;
    twice.F1 = [&](double x, double t) { return 2.0 * once.F1(x, t); };
    twice.F2 = [&](double x, double t) { return 2.0 * once.F2(x, t); };
    twice.F3 = [&](double x, double t) { return 2.0 * once.F3(x, t); };
    const SimState a = bdf2_step(z, z, ws, once, 0.5);
    const SimState b = bdf2_step(z, z, ws, twice, 0.5);
    EXPECT_LT(rel_diff(2.0 * a.H, b.H), 1e-12);
    EXPECT_LT(rel_diff(2.0 * a.E, b.E), 1e-12);
    EXPECT_LT(rel_diff(2.0 * a.P, b.P), 1e-12);
    for (std::size_t l = 0; l < a.psi.size(); ++l) {
        EXPECT_LT(rel_diff(2.0 * a.psi[l], b.psi[l]), 1e-12);
    }
}

TEST(StepCount, RoundsOrWarns)
{
    std::vector<std::string> warnings;
    EXPECT_EQ(step_count(1.0, 1e-3, warnings), 1000);
    EXPECT_EQ(step_count(2.0, 0.04, warnings), 50);
    EXPECT_TRUE(warnings.empty());
    EXPECT_EQ(step_count(1.0, 0.3, warnings), 3);
    EXPECT_EQ(warnings.size(), 1u);
    EXPECT_THROW(step_count(1.0, 0.0, warnings), DomainError);
}

TEST(RunSimulation, TwoStepsAndWarnings)
{
    SimulationConfig config;
    config.quad = fitted_half();
    config.tau = 0.01;
    config.finalTime = 0.02;
    config.E0 = energy_initial_E;
    config.sampleEvery = 1;
    const SimulationResult r = run_simulation(config);
    EXPECT_EQ(r.steps, 2);
    EXPECT_DOUBLE_EQ(r.final.t, 0.02);
    EXPECT_EQ(r.energy.size(), 3u);
    EXPECT_TRUE(r.warnings.empty());

    config.finalTime = 0.025;
    const SimulationResult w = run_simulation(config);
    EXPECT_EQ(w.steps, 2);
    EXPECT_EQ(w.warnings.size(), 1u);

    config.quad.reset();
    EXPECT_THROW(run_simulation(config), DomainError);
}

TEST(RunSimulation, DeterministicAndGated)
{
    const ManufacturedProblem mp(0.5);
    SimulationConfig config;
    config.params = mp.params();
    config.mesh = Mesh1D(0.0, 2.0, 10);
    config.degree = 2;
    config.tau = 0.01;
    config.finalTime = 0.5;
    config.quad = fitted_half();
    config.sources = mp.sources();
    config.residualGate = 1e-10;
    const SimulationResult a = run_simulation(config);
    const SimulationResult b = run_simulation(config);
    EXPECT_EQ(a.final.E.coeffs(), b.final.E.coeffs());
    EXPECT_EQ(a.final.H.coeffs(), b.final.H.coeffs());
    EXPECT_LT(a.maxResidual, 1e-10);
    EXPECT_GT(a.maxResidual, 0.0);
}

TEST(RunSimulation, ManufacturedSecondOrderForLinears)
{
    ConvergenceSetup setup;
    setup.alpha = 0.5;
    setup.degree = 1;
    setup.cells = {20, 40};
    const std::vector<ConvergenceRow> rows = convergence_study(setup, fitted_half());
    EXPECT_NEAR(rows[1].orderE, 2.0, 0.15);
    EXPECT_NEAR(rows[1].orderH, 2.0, 0.15);
    EXPECT_NEAR(rows[1].orderP, 2.0, 0.15);
}
