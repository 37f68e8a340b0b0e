/**
 * @file quadopt.hpp
 * @brief Positive sum-of-poles quadrature for the diffusive representation of the
 *        Caputo kernel, fitted over a frequency band.
 *
 * The Caputo derivative of order alpha is approximated by sum_l zeta_l psi_l where each
 * psi_l relaxes at rate lambda_l. In the frequency domain that replaces (i w)^alpha by
 *
 *     B(w) = sin(pi alpha)/pi * (i w) * sum_l zeta_l lambda_l^(alpha-1) / (i w + lambda_l),
 *
 * and the fit drives chi(w) = B(w) / (i w)^alpha towards one at log-spaced samples while
 * keeping every zeta_l > 0 and 0 < lambda_l < 10 w_max.
 */

#ifndef COLECOLE_QUADOPT_HPP
#define COLECOLE_QUADOPT_HPP

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace colecole {

/// Calibration band [omegaMin, omegaMax] sampled at `samples` log-spaced points.
struct FrequencyBand {
    FrequencyBand(double omegaMin, double omegaMax, int samples);

    double omegaMin;
    double omegaMax;
    int samples;

    /// Upper bound on admissible abscissae.
    double lambdaCap() const { return 10.0 * omegaMax; }
};

/**
 * @brief Weights zeta_l and abscissae lambda_l of a diffusive quadrature.
 *
 * All weights and abscissae are strictly positive. When a calibration band is attached,
 * every abscissa is also below 10 * omegaMax.
 */
class DiffusiveQuadrature {
public:
    DiffusiveQuadrature(std::vector<double> weights, std::vector<double> abscissae, double alpha,
                        std::optional<FrequencyBand> band = std::nullopt);

    std::size_t size() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& abscissae() const { return abscissae_; }
    double alpha() const { return alpha_; }
    const std::optional<FrequencyBand>& band() const { return band_; }

private:
    std::vector<double> weights_;
    std::vector<double> abscissae_;
    double alpha_;
    std::optional<FrequencyBand> band_;
};

/// omega_m = omegaMin (omegaMax/omegaMin)^((m-1)/(M-1)), m = 1..M.
std::vector<double> log_spaced_samples(const FrequencyBand& band);

/// n log-spaced points on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int n);

/**
 * @brief Modified Gauss-Jacobi initializer.
 *
 * Builds the L-point rule for (1+x)^nu1 (1-x)^nu2 with nu1 = 1 - 2 abar, nu2 = 1 + 2 abar,
 * abar = 2 alpha - 1, and maps it to (0, inf) through lambda = ((1-x)/(1+x))^2.
 * No band is attached, so abscissae may exceed any later cap.
 */
DiffusiveQuadrature gauss_jacobi_init(int L, double alpha);

/// Quadrature symbol of the diffusive approximation, sin(pi a)/pi (iw) sum zeta lambda^(a-1)/(iw+lambda).
std::complex<double> diffusive_symbol(double omega, const DiffusiveQuadrature& quad, double alpha);

/// chi(omega) = B(omega) / (i omega)^alpha; identically one for an exact quadrature.
std::complex<double> chi(double omega, const DiffusiveQuadrature& quad, double alpha);

/// delta^2 = sum_m |chi(omega_m) - 1|^2.
double objective(const DiffusiveQuadrature& quad, double alpha, std::span<const double> samples);

/// max_m |chi(omega_m) - 1| over the given grid.
double max_chi_error(const DiffusiveQuadrature& quad, double alpha, std::span<const double> grid);

struct OptimizerOptions {
    int maxIterations = 2000;
    /// Stop once the objective drops by less than this fraction over `stallWindow` iterations.
    double relativeDecrease = 1e-10;
    int stallWindow = 5;
};

struct QuadratureFit {
    DiffusiveQuadrature quadrature;
    /// Feasible starting point (Gauss-Jacobi abscissae clipped into the cap).
    DiffusiveQuadrature initial;
    double initialObjective;
    double finalObjective;
    int iterations;
    bool improved;
};

/**
 * @brief Fits zeta, lambda by minimizing delta^2 over the band's log-spaced samples.
 *
 * Positivity and the abscissa cap hold at every iterate: the search runs over
 * u = log zeta and v = logit(lambda / (10 omegaMax)) with BFGS and backtracking.
 * Never throws for a valid band; `improved` reports whether the initializer was beaten.
 */
QuadratureFit fit_quadrature(double alpha, int L, const FrequencyBand& band,
                             const OptimizerOptions& options = {});

/// The initializer is still a feasible quadrature; it is carried by the exception.
class OptimizationError : public std::runtime_error {
public:
    OptimizationError(const std::string& what, DiffusiveQuadrature fallback)
        : std::runtime_error(what), fallback_(std::move(fallback))
    {
    }
    const DiffusiveQuadrature& fallback() const { return fallback_; }

private:
    DiffusiveQuadrature fallback_;
};

/// fit_quadrature that throws OptimizationError when no iterate improves on the initializer.
DiffusiveQuadrature optimize_quadrature(double alpha, int L, const FrequencyBand& band,
                                        const OptimizerOptions& options = {});

/// Gradient of delta^2 in (log zeta, logit) coordinates; exposed for finite-difference checks.
std::vector<double> objective_gradient(std::span<const double> params, double alpha,
                                       const FrequencyBand& band, std::span<const double> samples);
/// delta^2 in the same coordinates; +inf outside the numerically safe box.
double objective_in_params(std::span<const double> params, double alpha, const FrequencyBand& band,
                           std::span<const double> samples);

/// "# alpha=.. L=.. omega_min=.. omega_max=.." then one "zeta lambda" line per pole.
void write_quadrature(std::ostream& os, const DiffusiveQuadrature& quad);
void write_quadrature(const std::string& path, const DiffusiveQuadrature& quad);
DiffusiveQuadrature read_quadrature(std::istream& is);
DiffusiveQuadrature read_quadrature(const std::string& path);

} // namespace colecole

#endif // COLECOLE_QUADOPT_HPP
