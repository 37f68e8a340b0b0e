// Experiment runner: quadrature fits, convergence tables, energy traces, dispersion
// curves and fast-vs-direct timings. Every run writes CSVs plus manifest.txt into --out.

#include "colecole/experiments.hpp"
#include "colecole/io_format.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace colecole;

namespace {

struct Options {
    std::string out = "out";
    std::vector<double> alpha;
    std::vector<int> degree;
    std::vector<int> cells;
    bool deskScale = false;

    double eps0 = 1.0;
    double epsInf = 1.0;
    double epsS = 2.0;
    double mu0 = 1.0;
    double tau0 = 1.0;

    std::optional<double> finalTime;
    std::optional<std::string> tauRule;
    double tau = 1e-3;
    std::string sources;
    int sampleEvery = 1;

    std::optional<int> L;
    std::optional<double> omegaMin;
    std::optional<double> omegaMax;
    int samples = 0;
    std::string quadFile;

    int gridPoints = 400;
    double dispOmegaMin = 1e-2;
    double dispOmegaMax = 1e4;
    std::vector<long> steps;
    std::optional<int> repeats;
    std::optional<int> directRepeats;
};

std::string join(const std::vector<std::string>& items)
{
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        s += (i ? "," : "") + items[i];
    }
    return s + "]";
}

template <class T>
std::string list(const std::vector<T>& v)
{
    std::vector<std::string> items;
    for (const T& x : v) {
        if constexpr (std::is_floating_point_v<T>) {
            items.push_back(fmt_num(x));
        } else {
            items.push_back(std::to_string(x));
        }
    }
    return join(items);
}

// Key-value echo of the resolved configuration. Keys match the long option names, so the
// file can be fed back with --config; run statistics go into comment lines.
class Manifest {
public:
    explicit Manifest(std::string command) : command_(std::move(command)) {}

    void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void note(const std::string& line) { notes_.push_back(line); }

    void write(const fs::path& path) const
    {
        std::ofstream os(path);
        os << "# colecole_cli " << command_ << '\n';
        for (const auto& [k, v] : entries_) {
            os << k << '=' << v << '\n';
        }
        for (const std::string& n : notes_) {
            os << "# " << n << '\n';
        }
    }

private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> entries_;
    std::vector<std::string> notes_;
};

std::string in_quotes(const std::string& s) { return '"' + s + '"'; }

fs::path output_file(const Options& o, const std::string& name) { return fs::path(o.out) / name; }

std::ofstream open_output(const fs::path& path)
{
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return os;
}

MaterialParams material(const Options& o, double alpha)
{
    return MaterialParams(o.eps0, o.epsInf, o.epsS, o.mu0, o.tau0, alpha);
}

void record_material(const Options& o, Manifest& m)
{
    m.set("eps0", fmt_num(o.eps0));
    m.set("eps-inf", fmt_num(o.epsInf));
    m.set("eps-s", fmt_num(o.epsS));
    m.set("mu0", fmt_num(o.mu0));
    m.set("tau0", fmt_num(o.tau0));
}

bool is_unit_material(const Options& o)
{
    return o.eps0 == 1.0 && o.epsInf == 1.0 && o.epsS == 2.0 && o.mu0 == 1.0 && o.tau0 == 1.0;
}

QuadratureSource quadrature_source(const Options& o, double omegaMin, double omegaMax, int L, Manifest& m)
{
    QuadratureSource source;
    source.L = o.L.value_or(L);
    source.omegaMin = o.omegaMin.value_or(omegaMin);
    source.omegaMax = o.omegaMax.value_or(omegaMax);
    source.samples = o.samples;
    source.file = o.quadFile;
    if (source.file.empty()) {
        m.set("L", std::to_string(source.L));
        m.set("omega-min", fmt_num(source.omegaMin));
        m.set("omega-max", fmt_num(source.omegaMax));
        m.set("samples", std::to_string(source.band().samples));
    } else {
        m.set("quad-file", in_quotes(source.file));
    }
    return source;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback)
{
    return given.empty() ? fallback : given;
}

std::string tag(double alpha) { return "a" + fmt_num(alpha); }

int cmd_optimize(const Options& o, Manifest& m)
{
    const std::vector<double> alphas = or_default(o.alpha, {0.5});
    m.set("alpha", list(alphas));
    const QuadratureSource source = quadrature_source(o, 0.5, 5.0, 20, m);
    if (!source.file.empty()) {
        throw std::runtime_error("optimize fits a new quadrature; --quad-file does not apply");
    }
    m.set("grid-points", std::to_string(o.gridPoints));
    int status = 0;
    for (double alpha : alphas) {
        const OptimizeReport report = run_optimize(alpha, source.L, source.band(), o.gridPoints);
        const std::string name = tag(alpha) + "_L" + std::to_string(source.L);
        const QuadratureFit& fit = report.fit;
        auto q = open_output(output_file(o, "quadrature_" + name + ".txt"));
        write_quadrature(q, fit.improved ? fit.quadrature : fit.initial);
        auto csv = open_output(output_file(o, "chi_error_" + name + ".csv"));
        write_chi_error_csv(csv, report);
        m.note(name + ": objective " + fmt_num(fit.initialObjective) + " -> " + fmt_num(fit.finalObjective) +
               " in " + std::to_string(fit.iterations) + " iterations");
        if (!fit.improved) {
            m.note(name + ": optimizer did not improve on the initializer; initializer written");
            std::cerr << "error: quadrature fit for alpha=" << alpha
                      << " did not improve on the Gauss-Jacobi initializer (initializer written)\n";
            status = 2;
        }
    }
    return status;
}

int cmd_convergence(const Options& o, Manifest& m)
{
    if (!o.sources.empty() && o.sources != "manufactured") {
        throw std::runtime_error("convergence runs need --sources manufactured");
    }
    if (!is_unit_material(o)) {
        throw std::runtime_error("the manufactured problem is defined for unit material constants");
    }
    ConvergenceSetup base;
    const std::vector<double> alphas = or_default(o.alpha, {0.3, 0.5, 0.7});
    const std::vector<int> degrees = or_default(o.degree, {1, 2});
    base.cells = or_default(o.cells, {10, 20, 40, 80});
    base.finalTime = o.finalTime.value_or(2.0);
    base.tauRule = parse_tau_rule(o.tauRule.value_or("h2"));
    base.tauFixed = o.tau;
    m.set("alpha", list(alphas));
    m.set("degree", list(degrees));
    m.set("cells", list(base.cells));
    m.set("final-time", fmt_num(base.finalTime));
    m.set("tau-rule", in_quotes(to_string(base.tauRule)));
    m.set("tau", fmt_num(base.tauFixed));
    m.set("sources", in_quotes("manufactured"));
    record_material(o, m);
    const QuadratureSource source = quadrature_source(o, 0.5, 5.0, 20, m);
    for (double alpha : alphas) {
        const DiffusiveQuadrature quad = resolve_quadrature(alpha, source);
        for (int k : degrees) {
            ConvergenceSetup setup = base;
            setup.alpha = alpha;
            setup.degree = k;
            const auto start = std::chrono::steady_clock::now();
            const std::vector<ConvergenceRow> rows = convergence_study(setup, quad);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const std::string name = "convergence_" + tag(alpha) + "_k" + std::to_string(k) + ".csv";
            auto os = open_output(output_file(o, name));
            write_convergence_csv(os, rows);
            m.note(name + ": wall " + fmt_num(secs) + " s");
        }
    }
    return 0;
}

int cmd_energy(const Options& o, Manifest& m)
{
    if (!o.sources.empty() && o.sources != "zero") {
        throw std::runtime_error("energy runs need --sources zero");
    }
    EnergySetup base;
    const std::vector<double> alphas = or_default(o.alpha, {0.3, 0.5, 0.7});
    base.cells = or_default(o.cells, {800}).front();
    base.degree = or_default(o.degree, {1}).front();
    base.finalTime = o.finalTime.value_or(2.5);
    base.tauRule = parse_tau_rule(o.tauRule.value_or("h"));
    base.tauFixed = o.tau;
    base.sampleEvery = o.sampleEvery;
    m.set("alpha", list(alphas));
    m.set("cells", std::to_string(base.cells));
    m.set("degree", std::to_string(base.degree));
    m.set("final-time", fmt_num(base.finalTime));
    m.set("tau-rule", in_quotes(to_string(base.tauRule)));
    m.set("tau", fmt_num(base.tauFixed));
    m.set("sample-every", std::to_string(base.sampleEvery));
    m.set("sources", in_quotes("zero"));
    record_material(o, m);
    const QuadratureSource source = quadrature_source(o, 0.5, 5.0, 20, m);
    for (double alpha : alphas) {
        EnergySetup setup = base;
        setup.params = material(o, alpha);
        const SimulationResult run = energy_study(setup, resolve_quadrature(alpha, source));
        auto trace = open_output(output_file(o, "energy_" + tag(alpha) + ".csv"));
        write_energy_csv(trace, run.energy);
        auto diff = open_output(output_file(o, "energy_diff_" + tag(alpha) + ".csv"));
        write_energy_difference_csv(diff, run.energy);
        m.note(tag(alpha) + ": steps " + std::to_string(run.steps) + ", wall " + fmt_num(run.wallSeconds) + " s");
        for (const std::string& w : run.warnings) {
            m.note(tag(alpha) + ": warning: " + w);
        }
    }
    return 0;
}

int cmd_dispersion(const Options& o, Manifest& m)
{
    const std::vector<double> alphas = or_default(o.alpha, {0.3, 0.5, 0.7, 1.0});
    m.set("alpha", list(alphas));
    m.set("disp-omega-min", fmt_num(o.dispOmegaMin));
    m.set("disp-omega-max", fmt_num(o.dispOmegaMax));
    m.set("grid-points", std::to_string(o.gridPoints));
    record_material(o, m);
    const QuadratureSource source = quadrature_source(o, 20.0 * std::numbers::pi, 200.0 * std::numbers::pi, 6, m);

    std::vector<double> omegas = log_grid(o.dispOmegaMin, o.dispOmegaMax, o.gridPoints);
    if (source.file.empty()) {
        omegas.push_back(source.omegaMin);
        omegas.push_back(source.omegaMax);
        std::sort(omegas.begin(), omegas.end());
    }
    const MaterialParams base = material(o, 0.5);
    for (const DispersionCurve& curve : dispersion_study(base, alphas, omegas, source)) {
        auto ex = open_output(output_file(o, "dispersion_exact_" + tag(curve.alpha) + ".csv"));
        write_dispersion_csv(ex, curve.exact);
        if (!curve.approx.empty()) {
            auto ap = open_output(output_file(o, "dispersion_approx_" + tag(curve.alpha) + ".csv"));
            write_dispersion_csv(ap, curve.approx);
            if (source.file.empty()) {
                m.note(tag(curve.alpha) + ": max relative phase-velocity gap on the band " +
                       fmt_num(max_phase_velocity_gap(curve, source.omegaMin, source.omegaMax)));
            }
        }
    }
    return 0;
}

int cmd_timing(const Options& o, Manifest& m)
{
    TimingSetup setup;
    setup.alpha = or_default(o.alpha, {0.5}).front();
    setup.cells = or_default(o.cells, {10}).front();
    setup.degree = or_default(o.degree, {1}).front();
    setup.finalTime = o.finalTime.value_or(1.0);
    setup.steps = or_default(o.steps, o.deskScale ? std::vector<long>{12000, 24000, 48000, 96000}
                                                   : std::vector<long>{10000, 20000, 40000, 80000, 160000});
    setup.repeats = o.repeats.value_or(o.deskScale ? 7 : 1);
    setup.directRepeats = o.directRepeats.value_or(o.deskScale ? 3 : 1);
    m.set("alpha", fmt_num(setup.alpha));
    m.set("cells", std::to_string(setup.cells));
    m.set("degree", std::to_string(setup.degree));
    m.set("final-time", fmt_num(setup.finalTime));
    m.set("steps", list(setup.steps));
    m.set("repeats", std::to_string(setup.repeats));
    m.set("direct-repeats", std::to_string(setup.directRepeats));
    m.set("sources", in_quotes("manufactured"));
    const QuadratureSource source = quadrature_source(o, 0.5, 5.0, 20, m);
    const std::vector<TimingRow> rows = timing_study(setup, resolve_quadrature(setup.alpha, source));
    auto os = open_output(output_file(o, "timing.csv"));
    write_timing_csv(os, rows);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cole-Cole Maxwell solver: diffusive quadrature, DG + BDF2 experiments"};
    app.set_config("--config", "", "Read options from an INI/TOML-style key=value file");
    app.require_subcommand(1);
    app.failure_message([](const CLI::App*, const CLI::Error& e) { return "error: " + std::string(e.what()) + "\n"; });

    Options o;
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--alpha", o.alpha, "Fractional order(s)")->delimiter(',');
    app.add_option("--degree", o.degree, "Polynomial degree(s)")->delimiter(',');
    app.add_option("--cells", o.cells, "Cell count(s)")->delimiter(',');
    app.add_flag("--desk-scale", o.deskScale, "Scaled-down grids for quick runs");

    app.add_option("--eps0", o.eps0)->capture_default_str();
    app.add_option("--eps-inf", o.epsInf)->capture_default_str();
    app.add_option("--eps-s", o.epsS)->capture_default_str();
    app.add_option("--mu0", o.mu0)->capture_default_str();
    app.add_option("--tau0", o.tau0)->capture_default_str();

    app.add_option("--final-time", o.finalTime, "Final time T");
    app.add_option("--tau-rule", o.tauRule, "Time step rule: fixed, h or h2");
    app.add_option("--tau", o.tau, "Time step when --tau-rule fixed")->capture_default_str();
    app.add_option("--sources", o.sources, "Source set: zero or manufactured");
    app.add_option("--sample-every", o.sampleEvery, "Energy sample cadence in steps")->capture_default_str();

    app.add_option("--L", o.L, "Number of diffusive poles");
    app.add_option("--omega-min", o.omegaMin, "Calibration band lower end");
    app.add_option("--omega-max", o.omegaMax, "Calibration band upper end");
    app.add_option("--samples", o.samples, "Calibration samples (0: 2L)")->capture_default_str();
    app.add_option("--quad-file", o.quadFile, "Read the quadrature from this file instead of fitting");

    app.add_option("--grid-points", o.gridPoints, "Points of the error / dispersion grid")->capture_default_str();
    app.add_option("--disp-omega-min", o.dispOmegaMin)->capture_default_str();
    app.add_option("--disp-omega-max", o.dispOmegaMax)->capture_default_str();
    app.add_option("--steps", o.steps, "Time step counts for timing")->delimiter(',');
    app.add_option("--repeats", o.repeats, "Fast-solver timing repetitions (median is kept)");
    app.add_option("--direct-repeats", o.directRepeats, "Direct-solver timing repetitions");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"optimize", "Fit the diffusive quadrature and write |chi - 1| curves"},
        {"convergence", "Manufactured-solution L2 errors and orders"},
        {"energy", "Energy traces of the zero-source problem"},
        {"dispersion", "Exact and approximate dispersion curves"},
        {"timing", "Wall time of the fast and the direct solver"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        fs::create_directories(o.out);
        Manifest manifest(command);
        manifest.set("out", in_quotes(o.out));
        manifest.set("desk-scale", o.deskScale ? "true" : "false");
        const auto start = std::chrono::steady_clock::now();
        int status = 0;
        if (command == "optimize") {
            status = cmd_optimize(o, manifest);
        } else if (command == "convergence") {
            status = cmd_convergence(o, manifest);
        } else if (command == "energy") {
            status = cmd_energy(o, manifest);
        } else if (command == "dispersion") {
            status = cmd_dispersion(o, manifest);
        } else {
            status = cmd_timing(o, manifest);
        }
        manifest.note("total wall " +
                      fmt_num(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()) + " s");
        manifest.write(output_file(o, "manifest.txt"));
        return status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
