/**
 * @file experiments.hpp
 * @brief Study drivers shared by the command-line tool and the acceptance suite.
 */

#ifndef COLECOLE_EXPERIMENTS_HPP
#define COLECOLE_EXPERIMENTS_HPP

#include "colecole/diagnostics.hpp"
#include "colecole/manufactured.hpp"
#include "colecole/quadopt.hpp"
#include "colecole/stepper.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace colecole {

/// Fit parameters of a quadrature, or a file to read it from.
struct QuadratureSource {
    double omegaMin = 0.5;
    double omegaMax = 5.0;
    int L = 20;
    /// Calibration samples; 0 means 2L.
    int samples = 0;
    /// When set, the quadrature is read from this file and the fit parameters are ignored.
    std::string file;

    FrequencyBand band() const;
};

/// Fitted (or loaded) quadrature for order alpha. A failed fit falls back to the initializer.
DiffusiveQuadrature resolve_quadrature(double alpha, const QuadratureSource& source);

struct ChiErrorSample {
    double omega;
    double error;
};

struct OptimizeReport {
    QuadratureFit fit;
    /// |chi - 1| on a log grid over [omegaMin / 2, 2 omegaMax].
    std::vector<ChiErrorSample> curve;
    std::vector<ChiErrorSample> initialCurve;
};

OptimizeReport run_optimize(double alpha, int L, const FrequencyBand& band, int gridPoints = 400);
void write_chi_error_csv(std::ostream& os, const OptimizeReport& report);

enum class TauRule { Fixed, H, HSquared };

/// tau for a mesh width h under the rule; `fixed` is used by TauRule::Fixed.
double resolve_tau(TauRule rule, double fixed, double h);
TauRule parse_tau_rule(const std::string& text);
std::string to_string(TauRule rule);

struct ConvergenceSetup {
    double alpha = 0.5;
    int degree = 1;
    std::vector<int> cells{10, 20, 40, 80};
    double finalTime = 2.0;
    TauRule tauRule = TauRule::HSquared;
    double tauFixed = 1e-3;
    /// Run the direct L1 solver instead of the fast one.
    bool direct = false;
};

/// Manufactured problem on [0, 2] at each mesh level; errors at finalTime and observed orders.
std::vector<ConvergenceRow> convergence_study(const ConvergenceSetup& setup, const DiffusiveQuadrature& quad);

struct EnergySetup {
    MaterialParams params = MaterialParams::unit(0.5);
    int cells = 800;
    int degree = 1;
    double finalTime = 2.5;
    TauRule tauRule = TauRule::H;
    double tauFixed = 1e-3;
    int sampleEvery = 1;
};

/// Zero-source run from the energy initial data; one sample per `sampleEvery` steps.
SimulationResult energy_study(const EnergySetup& setup, const DiffusiveQuadrature& quad);

/// Per-step differences F(t_n) - F(t_{n+1}) of E# and E1: "t,total_drop,e1_drop", t = t_{n+1}.
void write_energy_difference_csv(std::ostream& os, const std::vector<EnergySample>& samples);

struct EnergySummary {
    double minTotalDrop = 0.0;
    double minClassicalDrop = 0.0;
    double minDiffusive = 0.0;
    int classicalRises = 0;
    double initialTotal = 0.0;
};

EnergySummary summarize_energy(const std::vector<EnergySample>& samples);

struct DispersionCurve {
    double alpha;
    std::vector<DispersionSample> exact;
    /// Empty for alpha = 1, which has no diffusive approximation.
    std::vector<DispersionSample> approx;
};

/// Exact and approximate plane-wave data on `omegas` for each alpha in (0, 1].
std::vector<DispersionCurve> dispersion_study(const MaterialParams& base, const std::vector<double>& alphas,
                                              const std::vector<double>& omegas, const QuadratureSource& source);

/// Largest relative phase-velocity gap between approx and exact on [lo, hi].
double max_phase_velocity_gap(const DispersionCurve& curve, double lo, double hi);

struct TimingRow {
    long steps;
    double fastSeconds;
    double directSeconds;
};

struct TimingSetup {
    double alpha = 0.5;
    int cells = 10;
    int degree = 1;
    double finalTime = 1.0;
    std::vector<long> steps{10000, 20000, 40000, 80000, 160000};
    /// Each timing is the median over this many runs.
    int repeats = 1;
    int directRepeats = 1;
};

std::vector<TimingRow> timing_study(const TimingSetup& setup, const DiffusiveQuadrature& quad);

/// Least-squares slope of log(seconds) against log(steps).
double loglog_slope(const std::vector<long>& steps, const std::vector<double>& seconds);

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows);

} // namespace colecole

#endif // COLECOLE_EXPERIMENTS_HPP
