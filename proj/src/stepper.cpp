#include "colecole/stepper.hpp"

#include "colecole/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace colecole {

SimState SimState::initial(DgField H0, DgField E0, std::size_t modes)
{
    if (!H0.compatible(E0)) {
        throw DomainError("initial H and E live on different spaces");
    }
    DgField zero(H0.mesh(), H0.degree());
    SimState s{0.0, std::move(H0), std::move(E0), zero, std::vector<DgField>(modes, zero)};
    return s;
}

SimState SimState::zero(const Mesh1D& mesh, int degree, std::size_t modes)
{
    DgField z(mesh, degree);
    return SimState{0.0, z, z, z, std::vector<DgField>(modes, z)};
}

DgField project_source(const SpaceTimeFunction& f, double t, const Mesh1D& mesh, int degree)
{
    if (!f) {
        return DgField(mesh, degree);
    }
    return l2_project([&](double x) { return f(x, t); }, mesh, degree);
}

Bdf2Coefficients bdf2_coefficients(double tau, double alpha)
{
    if (!(tau > 0.0)) {
        throw DomainError("time step must be positive");
    }
    return {1.5 / tau, -2.0 / tau, 0.5 / tau, std::sin(std::numbers::pi * alpha) / std::numbers::pi};
}

HeSystem::HeSystem(const DgOperators& ops, double c1, double gammaE)
{
    const int n = ops.fieldSize();
    Eigen::SparseMatrix<double> diag(2 * n, 2 * n);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * n);
    const double mu0 = ops.params().mu0();
    for (int i = 0; i < n; ++i) {
        entries.emplace_back(i, i, mu0 * c1);
        entries.emplace_back(n + i, n + i, gammaE * c1);
    }
    diag.setFromTriplets(entries.begin(), entries.end());
    matrix_ = diag - ops.matrix();
    matrix_.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(matrix_);
    if (lu_->info() != Eigen::Success) {
        throw SolveError("factorization of the (H, E) system failed: " + lu_->lastErrorMessage());
    }
}

Eigen::VectorXd HeSystem::solve(const Eigen::VectorXd& rhs) const
{
    Eigen::VectorXd x = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success) {
        throw SolveError("(H, E) backsolve failed");
    }
    return x;
}

namespace {

double kappa_for(const DiffusiveQuadrature& quad, const MaterialParams& params, const Bdf2Coefficients& c)
{
    double sum = 0.0;
    for (std::size_t l = 0; l < quad.size(); ++l) {
        const double lambda = quad.abscissae()[l];
        sum += quad.weights()[l] * std::pow(lambda, params.alpha() - 1.0) / (c.c1 + lambda);
    }
    return 1.0 + params.tauAlpha() * c.c1 * c.cAlpha * sum;
}

const MaterialParams& checked_params(const DgOperators& ops, const DiffusiveQuadrature& quad)
{
    if (std::abs(quad.alpha() - ops.params().alpha()) > 1e-12) {
        throw DomainError("quadrature was fitted for alpha=" + std::to_string(quad.alpha()) +
                          " but the material has alpha=" + std::to_string(ops.params().alpha()));
    }
    return ops.params();
}

} // namespace

BdfWorkspace::BdfWorkspace(const DgOperators& ops, const DiffusiveQuadrature& quad, double tau)
    : ops_(ops),
      quad_(quad),
      tau_(tau),
      coeffs_(bdf2_coefficients(tau, checked_params(ops, quad).alpha())),
      kappa_(kappa_for(quad, ops.params(), coeffs_)),
      system_(ops, coeffs_.c1, ops.params().eps() + ops.params().deltaEps() / kappa_)
{
    drive_.reserve(quad.size());
    for (double lambda : quad.abscissae()) {
        drive_.push_back(coeffs_.cAlpha * std::pow(lambda, ops.params().alpha() - 1.0));
    }
}

DgField eliminate_psi(const DgField& Pn, const DgField& Pnm1, const DgField& Pnm2, const DgField& psiNm1,
                      const DgField& psiNm2, const BdfWorkspace& ws, std::size_t l)
{
    const Bdf2Coefficients& c = ws.coeffs();
    const double lambda = ws.quad().abscissae()[l];
    DgField out(Pn.mesh(), Pn.degree());
    out.coeffs() = (ws.drive(l) * (c.c1 * Pn.coeffs() + c.c2 * Pnm1.coeffs() + c.c3 * Pnm2.coeffs()) -
                    c.c2 * psiNm1.coeffs() - c.c3 * psiNm2.coeffs()) /
                   (c.c1 + lambda);
    return out;
}

namespace {

// kappa P^n = eps0 (eps_s - eps_inf) E^n + R; R collects F3 and every history term.
Eigen::VectorXd polarization_remainder(const DgField& Pnm1, const DgField& Pnm2, const std::vector<DgField>& psiNm1,
                                       const std::vector<DgField>& psiNm2, const DgField& F3n, const BdfWorkspace& ws)
{
    const Bdf2Coefficients& c = ws.coeffs();
    const DiffusiveQuadrature& quad = ws.quad();
    if (psiNm1.size() != quad.size() || psiNm2.size() != quad.size()) {
        throw DomainError("auxiliary history does not match the quadrature size");
    }
    const Eigen::VectorXd pHist = c.c2 * Pnm1.coeffs() + c.c3 * Pnm2.coeffs();
    double pWeight = 0.0;
    Eigen::VectorXd psiHist = Eigen::VectorXd::Zero(F3n.size());
    for (std::size_t l = 0; l < quad.size(); ++l) {
        const double w = quad.weights()[l] / (c.c1 + quad.abscissae()[l]);
        pWeight += w * ws.drive(l);
        psiHist += w * (c.c2 * psiNm1[l].coeffs() + c.c3 * psiNm2[l].coeffs());
    }
    const double ta = ws.params().tauAlpha();
    return F3n.coeffs() - ta * pWeight * pHist + ta * psiHist;
}

std::vector<DgField> all_psi(const DgField& Pn, const SimState& nm1, const SimState& nm2, const BdfWorkspace& ws)
{
    std::vector<DgField> psi;
    psi.reserve(ws.quad().size());
    for (std::size_t l = 0; l < ws.quad().size(); ++l) {
        psi.push_back(eliminate_psi(Pn, nm1.P, nm2.P, nm1.psi[l], nm2.psi[l], ws, l));
    }
    return psi;
}

} // namespace

DgField polarization_solve(const DgField& En, const DgField& Pnm1, const DgField& Pnm2,
                           const std::vector<DgField>& psiNm1, const std::vector<DgField>& psiNm2, const DgField& F3n,
                           const BdfWorkspace& ws)
{
    const Eigen::VectorXd r = polarization_remainder(Pnm1, Pnm2, psiNm1, psiNm2, F3n, ws);
    return DgField(En.mesh(), En.degree(), (ws.params().deltaEps() * En.coeffs() + r) / ws.kappa());
}

SimState bootstrap_first_step(const SimState& s0, const BdfWorkspace& ws, const SourceSet& sources)
{
    const MaterialParams& p = ws.params();
    const DiffusiveQuadrature& quad = ws.quad();
    const double tau = ws.tau();
    const Mesh1D& mesh = s0.H.mesh();
    const int k = s0.H.degree();

    const DgField F1 = project_source(sources.F1, s0.t, mesh, k);
    const DgField F2 = project_source(sources.F2, s0.t, mesh, k);
    const DgField F3 = project_source(sources.F3, s0.t + tau, mesh, k);

    SimState s1 = s0;
    s1.t = s0.t + tau;
    s1.H += (tau / p.mu0()) * (ws.ops().derivativeE(s0.H, s0.E) + F1);
    const DgField eStar = s0.E + (tau / p.eps()) * (ws.ops().derivativeH(s0.H, s0.E) + F2);

    // P^1 + tau0^a sum zeta psi^1 = eps0 de E^1 + F3^1 with E^1 = E* - dP/(eps0 eps_inf) and
    // psi^1 = (1 - tau lambda) psi^0 + C_a lambda^(a-1) dP.
    double driveSum = 0.0;
    Eigen::VectorXd relaxed = Eigen::VectorXd::Zero(s0.P.size());
    for (std::size_t l = 0; l < quad.size(); ++l) {
        driveSum += quad.weights()[l] * ws.drive(l);
        relaxed += quad.weights()[l] * (1.0 - tau * quad.abscissae()[l]) * s0.psi[l].coeffs();
    }
    const double denom = 1.0 + p.tauAlpha() * driveSum + p.deltaEps() / p.eps();
    const Eigen::VectorXd dP =
        (p.deltaEps() * eStar.coeffs() + F3.coeffs() - p.tauAlpha() * relaxed - s0.P.coeffs()) / denom;

    s1.E.coeffs() = eStar.coeffs() - dP / p.eps();
    s1.P.coeffs() += dP;
    for (std::size_t l = 0; l < quad.size(); ++l) {
        s1.psi[l].coeffs() = (1.0 - tau * quad.abscissae()[l]) * s0.psi[l].coeffs() + ws.drive(l) * dP;
    }
    return s1;
}

SimState bdf2_step(const SimState& nm1, const SimState& nm2, const BdfWorkspace& ws, const SourceSet& sources,
                   double tn)
{
    const MaterialParams& p = ws.params();
    const Bdf2Coefficients& c = ws.coeffs();
    const Mesh1D& mesh = nm1.H.mesh();
    const int k = nm1.H.degree();
    const Eigen::Index n = nm1.H.size();

    const DgField F1 = project_source(sources.F1, tn, mesh, k);
    const DgField F2 = project_source(sources.F2, tn, mesh, k);
    const DgField F3 = project_source(sources.F3, tn, mesh, k);

    const Eigen::VectorXd r = polarization_remainder(nm1.P, nm2.P, nm1.psi, nm2.psi, F3, ws);
    Eigen::VectorXd rhs(2 * n);
    rhs.head(n) = F1.coeffs() - p.mu0() * (c.c2 * nm1.H.coeffs() + c.c3 * nm2.H.coeffs());
    rhs.tail(n) = F2.coeffs() - p.eps() * (c.c2 * nm1.E.coeffs() + c.c3 * nm2.E.coeffs()) -
                  (c.c1 / ws.kappa()) * r - (c.c2 * nm1.P.coeffs() + c.c3 * nm2.P.coeffs());
    const Eigen::VectorXd he = ws.system().solve(rhs);

    DgField H(mesh, k, he.head(n));
    DgField E(mesh, k, he.tail(n));
    DgField P(mesh, k, (p.deltaEps() * E.coeffs() + r) / ws.kappa());
    std::vector<DgField> psi = all_psi(P, nm1, nm2, ws);
    return SimState{tn, std::move(H), std::move(E), std::move(P), std::move(psi)};
}

double StepResiduals::max() const { return std::max({h, e, p, psi}); }

namespace {

// ||sum of terms|| / max ||term||, or the absolute norm when every term vanishes.
double relative_residual(std::initializer_list<Eigen::VectorXd> terms, double h)
{
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(terms.begin()->size());
    double scale = 0.0;
    for (const Eigen::VectorXd& t : terms) {
        sum += t;
        scale = std::max(scale, std::sqrt(0.5 * h) * t.norm());
    }
    const double res = std::sqrt(0.5 * h) * sum.norm();
    return scale > 0.0 ? res / scale : res;
}

} // namespace

StepResiduals bdf2_residuals(const SimState& n, const SimState& nm1, const SimState& nm2, const BdfWorkspace& ws,
                             const SourceSet& sources)
{
    const MaterialParams& p = ws.params();
    const Bdf2Coefficients& c = ws.coeffs();
    const Mesh1D& mesh = n.H.mesh();
    const int k = n.H.degree();
    const double h = mesh.h();
    const auto bdf = [&](const DgField& a, const DgField& b, const DgField& d) -> Eigen::VectorXd {
        return c.c1 * a.coeffs() + c.c2 * b.coeffs() + c.c3 * d.coeffs();
    };
    const Eigen::VectorXd F1 = project_source(sources.F1, n.t, mesh, k).coeffs();
    const Eigen::VectorXd F2 = project_source(sources.F2, n.t, mesh, k).coeffs();
    const Eigen::VectorXd F3 = project_source(sources.F3, n.t, mesh, k).coeffs();
    const Eigen::VectorXd dP = bdf(n.P, nm1.P, nm2.P);

    StepResiduals res;
    res.h = relative_residual({p.mu0() * bdf(n.H, nm1.H, nm2.H), -ws.ops().derivativeE(n.H, n.E).coeffs(), -F1}, h);
    res.e = relative_residual(
        {p.eps() * bdf(n.E, nm1.E, nm2.E), dP, -ws.ops().derivativeH(n.H, n.E).coeffs(), -F2}, h);

    Eigen::VectorXd memory = Eigen::VectorXd::Zero(n.P.size());
    for (std::size_t l = 0; l < ws.quad().size(); ++l) {
        memory += p.tauAlpha() * ws.quad().weights()[l] * n.psi[l].coeffs();
        const double lambda = ws.quad().abscissae()[l];
        res.psi = std::max(res.psi, relative_residual({bdf(n.psi[l], nm1.psi[l], nm2.psi[l]),
                                                       lambda * n.psi[l].coeffs(), -ws.drive(l) * dP},
                                                      h));
    }
    res.p = relative_residual({n.P.coeffs(), memory, -p.deltaEps() * n.E.coeffs(), -F3}, h);
    return res;
}

long step_count(double finalTime, double tau, std::vector<std::string>& warnings)
{
    if (!(tau > 0.0) || !(finalTime >= 0.0)) {
        throw DomainError("need tau > 0 and T >= 0");
    }
    const double ratio = finalTime / tau;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
        return static_cast<long>(nearest);
    }
    const long steps = static_cast<long>(std::floor(ratio));
    warnings.push_back("T=" + std::to_string(finalTime) + " is not a multiple of tau=" + std::to_string(tau) +
                       "; stopping at t=" + std::to_string(steps * tau));
    return steps;
}

SimState initial_state(const SimulationConfig& config, std::size_t modes)
{
    SimState s = SimState::zero(config.mesh, config.degree, modes);
    if (config.E0 || config.H0) {
        const ScalarFunction zero = [](double) { return 0.0; };
        auto [E, H] = project_initial_EH(config.E0 ? config.E0 : zero, config.H0 ? config.H0 : zero, config.params,
                                         config.mesh, config.degree);
        s.E = std::move(E);
        s.H = std::move(H);
    }
    return s;
}

SimulationResult run_simulation(const SimulationConfig& config)
{
    if (!config.quad) {
        throw DomainError("the fast solver needs a diffusive quadrature");
    }
    const auto start = std::chrono::steady_clock::now();
    SimulationResult result{initial_state(config, config.quad->size()), {}, 0, 0.0, 0.0, {}};
    result.steps = step_count(config.finalTime, config.tau, result.warnings);

    const DgOperators ops(config.mesh, config.degree, config.params);
    const BdfWorkspace ws(ops, *config.quad, config.tau);
    const auto sample = [&](long n, const SimState& s) {
        if (config.sampleEvery > 0 && (n % config.sampleEvery == 0 || n == result.steps)) {
            result.energy.push_back(energy_sample(s, config.params, *config.quad));
        }
    };

    SimState older = result.final;
    sample(0, older);
    if (result.steps == 0) {
        result.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return result;
    }
    SimState newer = bootstrap_first_step(older, ws, config.sources);
    sample(1, newer);
    for (long n = 2; n <= result.steps; ++n) {
        SimState next = bdf2_step(newer, older, ws, config.sources, n * config.tau);
        if (config.residualGate > 0.0) {
            const double r = bdf2_residuals(next, newer, older, ws, config.sources).max();
            result.maxResidual = std::max(result.maxResidual, r);
            if (r > config.residualGate) {
                throw SolveError("discrete residual " + std::to_string(r) + " at step " + std::to_string(n));
            }
        }
        older = std::move(newer);
        newer = std::move(next);
        sample(n, newer);
    }
    result.final = std::move(newer);
    result.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace colecole
