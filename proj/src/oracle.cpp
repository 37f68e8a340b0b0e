#include "colecole/oracle.hpp"

#include "colecole/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace colecole {

namespace {

double l1_coefficient(int m, double alpha, double tau)
{
    const double scale = std::pow(tau, -alpha) / std::tgamma(2.0 - alpha);
    return scale * (std::pow(m + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(m), 1.0 - alpha));
}

} // namespace

std::vector<double> l1_coefficients(int n, double alpha, double tau)
{
    require_fractional_order(alpha);
    if (n < 1 || !(tau > 0.0)) {
        throw DomainError("L1 coefficients need n >= 1 and tau > 0");
    }
    std::vector<double> a(n);
    for (int m = 0; m < n; ++m) {
        a[m] = l1_coefficient(m, alpha, tau);
    }
    return a;
}

L1History::L1History(double alpha, double tau, int fieldSize, int capacity)
    : alpha_(alpha), tau_(tau), fieldSize_(fieldSize)
{
    extend(std::max(capacity, 1) + kBlock);
    store_.reserve(static_cast<std::size_t>(fieldSize) * std::max(capacity, 1));
}

void L1History::extend(int count)
{
    const int old = static_cast<int>(a_.size());
    if (count <= old) {
        return;
    }
    for (int m = old; m < count; ++m) {
        a_.push_back(l1_coefficient(m, alpha_, tau_));
    }
    // reversedDrop_(i) = a_q - a_{q-1} with q = count - 1 - i, so the weights of consecutive
    // levels against a fixed step are a contiguous slice.
    reversedDrop_.resize(count - 1);
    for (int i = 0; i + 1 < count; ++i) {
        const int q = count - 1 - i;
        reversedDrop_(i) = a_[q] - a_[q - 1];
    }
}

double L1History::a(int m)
{
    extend(m + 1);
    return a_[m];
}

void L1History::push(const DgField& P)
{
    if (P.size() != fieldSize_) {
        throw DomainError("history level has the wrong size");
    }
    store_.insert(store_.end(), P.coeffs().data(), P.coeffs().data() + fieldSize_);
    ++levels_;
}

double L1History::weight(int n, int m) const
{
    return m == 0 ? -a_[n - 1] : a_[n - m] - a_[n - m - 1];
}

void L1History::rebuildFar(int start)
{
    // far_(:, j) = sum over levels m < start of weight(start + j, m) P^m, in chunks of levels
    // so each weight block stays in cache.
    constexpr int chunk = 256;
    extend(start + kBlock);
    farStart_ = start;
    far_.setZero(fieldSize_, kBlock);
    const int top = static_cast<int>(a_.size()) - 1;
    Eigen::MatrixXd w(chunk, kBlock);
    for (int m0 = 0; m0 < start; m0 += chunk) {
        const int c = std::min(chunk, start - m0);
        for (int j = 0; j < kBlock; ++j) {
            // weight(start + j, m0 + i) = a_q - a_{q-1}, q = start + j - m0 - i
            w.col(j).head(c) = reversedDrop_.segment(top - start - j + m0, c);
            if (m0 == 0) {
                w(0, j) = weight(start + j, 0);
            }
        }
        const Eigen::Map<const Eigen::MatrixXd> levels(store_.data() + static_cast<std::size_t>(m0) * fieldSize_,
                                                       fieldSize_, c);
        far_.noalias() += levels * w.topRows(c);
    }
}

Eigen::VectorXd L1History::historyTerm()
{
    const int n = levels_;
    if (n == 0) {
        return Eigen::VectorXd::Zero(fieldSize_);
    }
    if (farStart_ < 0 || n < farStart_ || n >= farStart_ + kBlock) {
        rebuildFar(n);
    }
    Eigen::VectorXd out = far_.col(n - farStart_);
    for (int m = farStart_; m < n; ++m) {
        out += weight(n, m) * Eigen::Map<const Eigen::VectorXd>(store_.data() + static_cast<std::size_t>(m) * fieldSize_,
                                                                fieldSize_);
    }
    return out;
}

DgField l1_caputo_apply(L1History& history, const DgField& Pn)
{
    return DgField(Pn.mesh(), Pn.degree(), history.a(0) * Pn.coeffs() + history.historyTerm());
}

SimulationResult run_direct_simulation(const SimulationConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    const MaterialParams& p = config.params;
    SimulationResult result{initial_state(config, 0), {}, 0, 0.0, 0.0, {}};
    result.steps = step_count(config.finalTime, config.tau, result.warnings);
    if (result.steps == 0) {
        return result;
    }

    const DgOperators ops(config.mesh, config.degree, p);
    const Mesh1D& mesh = config.mesh;
    const int k = config.degree;
    const Eigen::Index n = ops.fieldSize();
    const double tau = config.tau;
    const Bdf2Coefficients c = bdf2_coefficients(tau, p.alpha());
    L1History history(p.alpha(), tau, ops.fieldSize(), static_cast<int>(result.steps) + 1);
    const double ta = p.tauAlpha();
    const double a0 = history.a(0);
    // (1 + tau0^a a0) P^n = eps0 de E^n + F3^n - tau0^a * history term.
    const double kappa = 1.0 + ta * a0;

    SimState older = result.final;
    history.push(older.P);

    // Forward Euler start with the L1 derivative over one step, a0 (P^1 - P^0).
    SimState newer = older;
    {
        const DgField F1 = project_source(config.sources.F1, 0.0, mesh, k);
        const DgField F2 = project_source(config.sources.F2, 0.0, mesh, k);
        const DgField F3 = project_source(config.sources.F3, tau, mesh, k);
        newer.t = tau;
        newer.H += (tau / p.mu0()) * (ops.derivativeE(older.H, older.E) + F1);
        const DgField eStar = older.E + (tau / p.eps()) * (ops.derivativeH(older.H, older.E) + F2);
        const Eigen::VectorXd dP = (p.deltaEps() * eStar.coeffs() + F3.coeffs() - older.P.coeffs()) /
                                   (1.0 + ta * a0 + p.deltaEps() / p.eps());
        newer.E.coeffs() = eStar.coeffs() - dP / p.eps();
        newer.P.coeffs() += dP;
    }
    history.push(newer.P);

    const HeSystem system(ops, c.c1, p.eps() + p.deltaEps() / kappa);
    Eigen::VectorXd rhs(2 * n);
    for (long step = 2; step <= result.steps; ++step) {
        const double tn = step * tau;
        const DgField F1 = project_source(config.sources.F1, tn, mesh, k);
        const DgField F2 = project_source(config.sources.F2, tn, mesh, k);
        const DgField F3 = project_source(config.sources.F3, tn, mesh, k);
        const Eigen::VectorXd r = F3.coeffs() - ta * history.historyTerm();

        rhs.head(n) = F1.coeffs() - p.mu0() * (c.c2 * newer.H.coeffs() + c.c3 * older.H.coeffs());
        rhs.tail(n) = F2.coeffs() - p.eps() * (c.c2 * newer.E.coeffs() + c.c3 * older.E.coeffs()) -
                      (c.c1 / kappa) * r - (c.c2 * newer.P.coeffs() + c.c3 * older.P.coeffs());
        const Eigen::VectorXd he = system.solve(rhs);

        SimState next{tn, DgField(mesh, k, he.head(n)), DgField(mesh, k, he.tail(n)), DgField(mesh, k), {}};
        next.P.coeffs() = (p.deltaEps() * next.E.coeffs() + r) / kappa;
        history.push(next.P);
        older = std::move(newer);
        newer = std::move(next);
    }
    result.final = std::move(newer);
    result.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace colecole
