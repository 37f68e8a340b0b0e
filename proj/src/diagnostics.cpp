#include "colecole/diagnostics.hpp"

#include "colecole/errors.hpp"
#include "colecole/gauss_jacobi.hpp"
#include "colecole/io_format.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace colecole {

namespace {

// Weighted sum over modes of lambda^power * ||psi_l||^2. Integrals of products of DG
// fields are taken from the modal coefficients, which is the exact element quadrature.
double weighted_psi_norm(const SimState& state, const DiffusiveQuadrature& quad, double power)
{
    if (state.psi.size() != quad.size()) {
        throw DomainError("state carries " + std::to_string(state.psi.size()) + " auxiliary modes but the quadrature has " +
                          std::to_string(quad.size()));
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < quad.size(); ++l) {
        sum += quad.weights()[l] * std::pow(quad.abscissae()[l], power) * state.psi[l].squaredNorm();
    }
    return sum;
}

} // namespace

double energy_classical(const SimState& state, const MaterialParams& params)
{
    return 0.5 * (params.eps() * state.E.squaredNorm() + params.mu0() * state.H.squaredNorm() +
                  state.P.squaredNorm() / params.deltaEps());
}

double energy_diffusive_sharp(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad)
{
    const double alpha = params.alpha();
    const double factor = std::numbers::pi / (2.0 * std::sin(std::numbers::pi * alpha)) * params.tauAlpha() /
                          params.deltaEps();
    return factor * weighted_psi_norm(state, quad, 1.0 - alpha);
}

double diffusive_dissipation(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad)
{
    const double alpha = params.alpha();
    const double factor =
        std::numbers::pi / std::sin(std::numbers::pi * alpha) * params.tauAlpha() / params.deltaEps();
    return -factor * weighted_psi_norm(state, quad, 2.0 - alpha);
}

double face_dissipation_total(const SimState& state, const MaterialParams& params)
{
    double sum = 0.0;
    for (double m : face_dissipation(state.H, state.E, params)) {
        sum += m;
    }
    return -sum;
}

double dissipation_rate(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad)
{
    return diffusive_dissipation(state, params, quad) + face_dissipation_total(state, params);
}

EnergySample energy_sample(const SimState& state, const MaterialParams& params, const DiffusiveQuadrature& quad)
{
    EnergySample s;
    s.t = state.t;
    s.e1 = energy_classical(state, params);
    s.e2Sharp = energy_diffusive_sharp(state, params, quad);
    s.total = s.e1 + s.e2Sharp;
    s.dissipation = dissipation_rate(state, params, quad);
    return s;
}

DispersionSample dispersion_from_k2(double omega, std::complex<double> k2)
{
    DispersionSample s;
    s.omega = omega;
    s.k = std::sqrt(k2);
    if (s.k.real() < 0.0) {
        s.k = -s.k;
    }
    s.phaseVelocity = omega / s.k.real();
    s.attenuation = -s.k.imag();
    return s;
}

namespace {

DispersionSample dispersion_with_q(double omega, const MaterialParams& params, std::complex<double> q)
{
    const double mu0 = params.mu0();
    const std::complex<double> k2 = (mu0 * params.eps() + mu0 * params.deltaEps() / (1.0 + q)) * omega * omega;
    return dispersion_from_k2(omega, k2);
}

} // namespace

DispersionSample dispersion_exact(double omega, const MaterialParams& params)
{
    return dispersion_exact(omega, params, params.alpha());
}

DispersionSample dispersion_exact(double omega, const MaterialParams& params, double alpha)
{
    if (!(omega > 0.0)) {
        throw DomainError("dispersion needs omega > 0");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("dispersion order must lie in (0, 1]");
    }
    // Principal branch: (i w tau0)^alpha = (w tau0)^alpha exp(i pi alpha / 2).
    const std::complex<double> q = std::polar(std::pow(omega * params.tau0(), alpha), 0.5 * std::numbers::pi * alpha);
    return dispersion_with_q(omega, params, q);
}

DispersionSample dispersion_debye(double omega, const MaterialParams& params)
{
    if (!(omega > 0.0)) {
        throw DomainError("dispersion needs omega > 0");
    }
    return dispersion_with_q(omega, params, std::complex<double>(0.0, omega * params.tau0()));
}

DispersionSample dispersion_approx(double omega, const MaterialParams& params, const DiffusiveQuadrature& quad)
{
    if (!(omega > 0.0)) {
        throw DomainError("dispersion needs omega > 0");
    }
    const std::complex<double> q = params.tauAlpha() * diffusive_symbol(omega, quad, params.alpha());
    return dispersion_with_q(omega, params, q);
}

double l2_error(const DgField& field, const ScalarFunction& exact)
{
    const Mesh1D& mesh = field.mesh();
    const GaussRule& rule = gauss_legendre_cached(field.degree() + 3);
    double sum = 0.0;
    for (int j = 0; j < mesh.cells(); ++j) {
        for (std::size_t p = 0; p < rule.nodes.size(); ++p) {
            const double xi = rule.nodes[p];
            const double diff = field.evaluate(j, xi) - exact(mesh.toPhysical(j, xi));
            sum += rule.weights[p] * diff * diff;
        }
    }
    return std::sqrt(0.5 * mesh.h() * sum);
}

void compute_orders(std::vector<ConvergenceRow>& rows)
{
    constexpr double floor = 1e-13;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        ConvergenceRow& row = rows[r];
        row.atRoundingFloor = row.errE < floor && row.errH < floor && row.errP < floor;
        if (r == 0) {
            row.orderE = row.orderH = row.orderP = nan;
            continue;
        }
        const ConvergenceRow& prev = rows[r - 1];
        const double ratio = static_cast<double>(row.cells) / prev.cells;
        const auto order = [&](double coarse, double fine) { return std::log(coarse / fine) / std::log(ratio); };
        row.orderE = order(prev.errE, row.errE);
        row.orderH = order(prev.errH, row.errH);
        row.orderP = order(prev.errP, row.errP);
    }
}

void write_energy_csv(std::ostream& os, const std::vector<EnergySample>& samples)
{
    os << "t,e1,e2_sharp,total,dissipation\n";
    for (const EnergySample& s : samples) {
        os << fmt_num(s.t) << ',' << fmt_num(s.e1) << ',' << fmt_num(s.e2Sharp) << ',' << fmt_num(s.total) << ','
           << fmt_num(s.dissipation) << '\n';
    }
}

void write_dispersion_csv(std::ostream& os, const std::vector<DispersionSample>& samples)
{
    os << "omega,re_k,im_k,c,eta\n";
    for (const DispersionSample& s : samples) {
        os << fmt_num(s.omega) << ',' << fmt_num(s.k.real()) << ',' << fmt_num(s.k.imag()) << ','
           << fmt_num(s.phaseVelocity) << ',' << fmt_num(s.attenuation) << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows)
{
    os << "n_cells,errE,ordE,errH,ordH,errP,ordP\n";
    for (const ConvergenceRow& r : rows) {
        const auto ord = [&](double o) { return std::isnan(o) || r.atRoundingFloor ? std::string() : fmt_num(o); };
        os << r.cells << ',' << fmt_num(r.errE) << ',' << ord(r.orderE) << ',' << fmt_num(r.errH) << ','
           << ord(r.orderH) << ',' << fmt_num(r.errP) << ',' << ord(r.orderP) << '\n';
    }
}

} // namespace colecole
