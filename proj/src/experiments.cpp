#include "colecole/experiments.hpp"

#include "colecole/errors.hpp"
#include "colecole/io_format.hpp"
#include "colecole/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace colecole {

FrequencyBand QuadratureSource::band() const { return FrequencyBand(omegaMin, omegaMax, samples > 0 ? samples : 2 * L); }

DiffusiveQuadrature resolve_quadrature(double alpha, const QuadratureSource& source)
{
    if (!source.file.empty()) {
        DiffusiveQuadrature q = read_quadrature(source.file);
        if (std::abs(q.alpha() - alpha) > 1e-12) {
            throw DomainError("quadrature file " + source.file + " was fitted for alpha=" + fmt_num(q.alpha()));
        }
        return q;
    }
    QuadratureFit fit = fit_quadrature(alpha, source.L, source.band());
    return fit.quadrature;
}

OptimizeReport run_optimize(double alpha, int L, const FrequencyBand& band, int gridPoints)
{
    OptimizeReport report{fit_quadrature(alpha, L, band), {}, {}};
    for (double w : log_grid(0.5 * band.omegaMin, 2.0 * band.omegaMax, gridPoints)) {
        report.curve.push_back({w, std::abs(chi(w, report.fit.quadrature, alpha) - 1.0)});
        report.initialCurve.push_back({w, std::abs(chi(w, report.fit.initial, alpha) - 1.0)});
    }
    return report;
}

void write_chi_error_csv(std::ostream& os, const OptimizeReport& report)
{
    os << "omega,err_optimized,err_initial\n";
    for (std::size_t i = 0; i < report.curve.size(); ++i) {
        os << fmt_num(report.curve[i].omega) << ',' << fmt_num(report.curve[i].error) << ','
           << fmt_num(report.initialCurve[i].error) << '\n';
    }
}

double resolve_tau(TauRule rule, double fixed, double h)
{
    switch (rule) {
    case TauRule::Fixed:
        return fixed;
    case TauRule::H:
        return h;
    case TauRule::HSquared:
        return h * h;
    }
    return fixed;
}

TauRule parse_tau_rule(const std::string& text)
{
    if (text == "h") {
        return TauRule::H;
    }
    if (text == "h2" || text == "h^2") {
        return TauRule::HSquared;
    }
    if (text == "fixed") {
        return TauRule::Fixed;
    }
    throw DomainError("tau rule must be fixed, h or h2, got '" + text + "'");
}

std::string to_string(TauRule rule)
{
    switch (rule) {
    case TauRule::Fixed:
        return "fixed";
    case TauRule::H:
        return "h";
    case TauRule::HSquared:
        return "h2";
    }
    return "fixed";
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceSetup& setup, const DiffusiveQuadrature& quad)
{
    const ManufacturedProblem problem(setup.alpha);
    std::vector<ConvergenceRow> rows;
    for (int cells : setup.cells) {
        SimulationConfig config;
        config.params = problem.params();
        config.mesh = Mesh1D(0.0, 2.0, cells);
        config.degree = setup.degree;
        config.tau = resolve_tau(setup.tauRule, setup.tauFixed, config.mesh.h());
        config.finalTime = setup.finalTime;
        config.quad = quad;
        config.sources = problem.sources();
        const SimulationResult run = setup.direct ? run_direct_simulation(config) : run_simulation(config);
        const double t = run.final.t;
        ConvergenceRow row;
        row.cells = cells;
        row.errE = l2_error(run.final.E, problem.exactE(t));
        row.errH = l2_error(run.final.H, problem.exactH(t));
        row.errP = l2_error(run.final.P, problem.exactP(t));
        rows.push_back(row);
    }
    compute_orders(rows);
    return rows;
}

SimulationResult energy_study(const EnergySetup& setup, const DiffusiveQuadrature& quad)
{
    SimulationConfig config;
    config.params = setup.params;
    config.mesh = Mesh1D(0.0, 2.0, setup.cells);
    config.degree = setup.degree;
    config.tau = resolve_tau(setup.tauRule, setup.tauFixed, config.mesh.h());
    config.finalTime = setup.finalTime;
    config.quad = quad;
    config.E0 = energy_initial_E;
    config.H0 = energy_initial_H;
    config.sampleEvery = setup.sampleEvery;
    return run_simulation(config);
}

void write_energy_difference_csv(std::ostream& os, const std::vector<EnergySample>& samples)
{
    os << "t,total_drop,e1_drop\n";
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        os << fmt_num(samples[i + 1].t) << ',' << fmt_num(samples[i].total - samples[i + 1].total) << ','
           << fmt_num(samples[i].e1 - samples[i + 1].e1) << '\n';
    }
}

EnergySummary summarize_energy(const std::vector<EnergySample>& samples)
{
    EnergySummary s;
    if (samples.empty()) {
        return s;
    }
    const double inf = std::numeric_limits<double>::infinity();
    s.initialTotal = samples.front().total;
    s.minTotalDrop = inf;
    s.minClassicalDrop = inf;
    s.minDiffusive = inf;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        s.minDiffusive = std::min(s.minDiffusive, samples[i].e2Sharp);
        if (i + 1 < samples.size()) {
            const double drop1 = samples[i].e1 - samples[i + 1].e1;
            s.minTotalDrop = std::min(s.minTotalDrop, samples[i].total - samples[i + 1].total);
            s.minClassicalDrop = std::min(s.minClassicalDrop, drop1);
            s.classicalRises += drop1 < 0.0 ? 1 : 0;
        }
    }
    return s;
}

std::vector<DispersionCurve> dispersion_study(const MaterialParams& base, const std::vector<double>& alphas,
                                              const std::vector<double>& omegas, const QuadratureSource& source)
{
    std::vector<DispersionCurve> curves;
    for (double alpha : alphas) {
        DispersionCurve curve{alpha, {}, {}};
        if (alpha == 1.0) {
            for (double w : omegas) {
                curve.exact.push_back(dispersion_exact(w, base, 1.0));
            }
        } else {
            const MaterialParams params = base.withAlpha(alpha);
            const DiffusiveQuadrature quad = resolve_quadrature(alpha, source);
            for (double w : omegas) {
                curve.exact.push_back(dispersion_exact(w, params));
                curve.approx.push_back(dispersion_approx(w, params, quad));
            }
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

double max_phase_velocity_gap(const DispersionCurve& curve, double lo, double hi)
{
    double gap = 0.0;
    for (std::size_t i = 0; i < curve.approx.size(); ++i) {
        const DispersionSample& e = curve.exact[i];
        if (e.omega < lo || e.omega > hi) {
            continue;
        }
        gap = std::max(gap, std::abs(curve.approx[i].phaseVelocity - e.phaseVelocity) / e.phaseVelocity);
    }
    return gap;
}

namespace {

double median(std::vector<double> v)
{
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    if (v.size() % 2 == 1) {
        return v[mid];
    }
    return 0.5 * (v[mid] + *std::max_element(v.begin(), v.begin() + mid));
}

} // namespace

std::vector<TimingRow> timing_study(const TimingSetup& setup, const DiffusiveQuadrature& quad)
{
    const ManufacturedProblem problem(setup.alpha);
    const int fastRepeats = std::max(1, setup.repeats);
    const int directRepeats = std::max(1, setup.directRepeats);
    std::vector<SimulationConfig> configs;
    for (long steps : setup.steps) {
        SimulationConfig config;
        config.params = problem.params();
        config.mesh = Mesh1D(0.0, 2.0, setup.cells);
        config.degree = setup.degree;
        config.tau = setup.finalTime / static_cast<double>(steps);
        config.finalTime = setup.finalTime;
        config.quad = quad;
        config.sources = problem.sources();
        configs.push_back(std::move(config));
    }
    // Sweeps over all sizes, so a slow spell of the machine hits every size alike.
    std::vector<std::vector<double>> fast(configs.size());
    std::vector<std::vector<double>> direct(configs.size());
    for (int r = 0; r < std::max(fastRepeats, directRepeats); ++r) {
        for (std::size_t i = 0; i < configs.size(); ++i) {
            if (r < fastRepeats) {
                fast[i].push_back(run_simulation(configs[i]).wallSeconds);
            }
            if (r < directRepeats) {
                direct[i].push_back(run_direct_simulation(configs[i]).wallSeconds);
            }
        }
    }
    std::vector<TimingRow> rows;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        rows.push_back({setup.steps[i], median(fast[i]), median(direct[i])});
    }
    return rows;
}

double loglog_slope(const std::vector<long>& steps, const std::vector<double>& seconds)
{
    const std::size_t n = steps.size();
    if (n < 2 || seconds.size() != n) {
        throw DomainError("slope needs at least two matching points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(static_cast<double>(steps[i]));
        my += std::log(seconds[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(static_cast<double>(steps[i])) - mx;
        sxy += dx * (std::log(seconds[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows)
{
    os << "Nt,fast_seconds,direct_seconds\n";
    std::vector<long> steps;
    std::vector<double> fast;
    std::vector<double> direct;
    for (const TimingRow& r : rows) {
        os << r.steps << ',' << fmt_num(r.fastSeconds) << ',' << fmt_num(r.directSeconds) << '\n';
        steps.push_back(r.steps);
        fast.push_back(r.fastSeconds);
        direct.push_back(r.directSeconds);
    }
    if (rows.size() >= 2) {
        os << "# slope_fast=" << fmt_num(loglog_slope(steps, fast)) << '\n';
        os << "# slope_direct=" << fmt_num(loglog_slope(steps, direct)) << '\n';
    }
}

} // namespace colecole
