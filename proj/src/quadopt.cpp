#include "colecole/quadopt.hpp"

#include "colecole/errors.hpp"
#include "colecole/gauss_jacobi.hpp"
#include "colecole/io_format.hpp"
#include "colecole/material.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace colecole {

namespace {

using cplx = std::complex<double>;

// Logistic coordinates beyond this magnitude would round lambda onto 0 or the cap.
constexpr double kLogitBound = 30.0;
constexpr double kLogWeightBound = 600.0;

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// (i omega)^p on the principal branch, omega > 0.
cplx i_omega_pow(double omega, double p)
{
    return std::polar(std::pow(omega, p), 0.5 * std::numbers::pi * p);
}

struct Unpacked {
    std::vector<double> zeta;
    std::vector<double> lambda;
};

Unpacked unpack(std::span<const double> params, double cap)
{
    const std::size_t L = params.size() / 2;
    Unpacked out{std::vector<double>(L), std::vector<double>(L)};
    for (std::size_t l = 0; l < L; ++l) {
        out.zeta[l] = std::exp(params[l]);
        out.lambda[l] = cap * sigmoid(params[L + l]);
    }
    return out;
}

bool inside_box(std::span<const double> params)
{
    const std::size_t L = params.size() / 2;
    for (std::size_t l = 0; l < L; ++l) {
        if (!(std::abs(params[l]) < kLogWeightBound) || !(std::abs(params[L + l]) < kLogitBound)) {
            return false;
        }
    }
    return true;
}

void require_feasible(const DiffusiveQuadrature& q)
{
    // Re-validates through the constructor; throws on any violation.
    DiffusiveQuadrature(q.weights(), q.abscissae(), q.alpha(), q.band());
}

} // namespace

FrequencyBand::FrequencyBand(double lo, double hi, int m) : omegaMin(lo), omegaMax(hi), samples(m)
{
    if (!(lo > 0.0) || !(hi > lo)) {
        throw DomainError("frequency band needs 0 < omega_min < omega_max");
    }
    if (m < 2) {
        throw DomainError("frequency band needs at least two samples");
    }
}

DiffusiveQuadrature::DiffusiveQuadrature(std::vector<double> weights, std::vector<double> abscissae,
                                         double alpha, std::optional<FrequencyBand> band)
    : weights_(std::move(weights)), abscissae_(std::move(abscissae)), alpha_(alpha), band_(band)
{
    require_fractional_order(alpha);
    if (weights_.empty() || weights_.size() != abscissae_.size()) {
        throw DomainError("quadrature needs L >= 1 weights and as many abscissae");
    }
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        if (!(weights_[l] > 0.0) || !std::isfinite(weights_[l])) {
            throw DomainError("quadrature weight " + std::to_string(l) + " is not strictly positive");
        }
        if (!(abscissae_[l] > 0.0) || !std::isfinite(abscissae_[l])) {
            throw DomainError("quadrature abscissa " + std::to_string(l) + " is not strictly positive");
        }
        if (band_ && !(abscissae_[l] < band_->lambdaCap())) {
            throw DomainError("quadrature abscissa " + std::to_string(l) + " exceeds 10 omega_max");
        }
    }
}

std::vector<double> log_spaced_samples(const FrequencyBand& band)
{
    return log_grid(band.omegaMin, band.omegaMax, band.samples);
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
        throw DomainError("log grid needs n >= 2 and 0 < lo < hi");
    }
    std::vector<double> out(n);
    const double ratio = hi / lo;
    for (int m = 0; m < n; ++m) {
        out[m] = lo * std::pow(ratio, static_cast<double>(m) / (n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

DiffusiveQuadrature gauss_jacobi_init(int L, double alpha)
{
    require_fractional_order(alpha);
    if (L < 1) {
        throw DomainError("quadrature needs L >= 1");
    }
    const double abar = 2.0 * alpha - 1.0;
    const double nu1 = 1.0 - 2.0 * abar; // exponent of (1 + x)
    const double nu2 = 1.0 + 2.0 * abar; // exponent of (1 - x)
    const GaussRule rule = gauss_jacobi(L, nu2, nu1);

    std::vector<double> zeta(L), lambda(L);
    for (int l = 0; l < L; ++l) {
        const double x = rule.nodes[l];
        const double r = (1.0 - x) / (1.0 + x);
        lambda[l] = r * r;
        zeta[l] = 4.0 * rule.weights[l] / (std::pow(1.0 + x, nu1 + 3.0) * std::pow(1.0 - x, nu2 - 1.0));
    }
    return DiffusiveQuadrature(std::move(zeta), std::move(lambda), alpha);
}

cplx diffusive_symbol(double omega, const DiffusiveQuadrature& quad, double alpha)
{
    const cplx s(0.0, omega);
    cplx sum = 0.0;
    for (std::size_t l = 0; l < quad.size(); ++l) {
        const double lam = quad.abscissae()[l];
        sum += quad.weights()[l] * std::pow(lam, alpha - 1.0) / (s + lam);
    }
    return sinc_alpha(alpha) * s * sum;
}

cplx chi(double omega, const DiffusiveQuadrature& quad, double alpha)
{
    return diffusive_symbol(omega, quad, alpha) / i_omega_pow(omega, alpha);
}

double objective(const DiffusiveQuadrature& quad, double alpha, std::span<const double> samples)
{
    double total = 0.0;
    for (double w : samples) {
        total += std::norm(chi(w, quad, alpha) - 1.0);
    }
    return total;
}

double max_chi_error(const DiffusiveQuadrature& quad, double alpha, std::span<const double> grid)
{
    double worst = 0.0;
    for (double w : grid) {
        worst = std::max(worst, std::abs(chi(w, quad, alpha) - 1.0));
    }
    return worst;
}

double objective_in_params(std::span<const double> params, double alpha, const FrequencyBand& band,
                           std::span<const double> samples)
{
    if (!inside_box(params)) {
        return std::numeric_limits<double>::infinity();
    }
    const Unpacked q = unpack(params, band.lambdaCap());
    const double ca = sinc_alpha(alpha);
    double total = 0.0;
    for (double w : samples) {
        const cplx s(0.0, w);
        cplx sum = 0.0;
        for (std::size_t l = 0; l < q.zeta.size(); ++l) {
            sum += q.zeta[l] * std::pow(q.lambda[l], alpha - 1.0) / (s + q.lambda[l]);
        }
        const cplx g = ca * i_omega_pow(w, 1.0 - alpha);
        total += std::norm(g * sum - 1.0);
    }
    return total;
}

std::vector<double> objective_gradient(std::span<const double> params, double alpha,
                                       const FrequencyBand& band, std::span<const double> samples)
{
    const std::size_t L = params.size() / 2;
    const Unpacked q = unpack(params, band.lambdaCap());
    const double ca = sinc_alpha(alpha);
    std::vector<double> grad(params.size(), 0.0);
    std::vector<cplx> term(L);
    for (double w : samples) {
        const cplx s(0.0, w);
        const cplx g = ca * i_omega_pow(w, 1.0 - alpha);
        cplx sum = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            term[l] = std::pow(q.lambda[l], alpha - 1.0) / (s + q.lambda[l]);
            sum += q.zeta[l] * term[l];
        }
        const cplx residual = std::conj(g * sum - 1.0);
        for (std::size_t l = 0; l < L; ++l) {
            const double lam = q.lambda[l];
            // d chi / d u_l with zeta = exp(u)
            const cplx dz = g * q.zeta[l] * term[l];
            // d chi / d lambda_l, then chain through lambda = cap * sigmoid(v)
            const cplx dlam = g * q.zeta[l] * term[l] * ((alpha - 1.0) / lam - 1.0 / (s + lam));
            const double dlam_dv = lam * (1.0 - sigmoid(params[L + l]));
            grad[l] += 2.0 * std::real(residual * dz);
            grad[L + l] += 2.0 * std::real(residual * dlam * dlam_dv);
        }
    }
    return grad;
}

QuadratureFit fit_quadrature(double alpha, int L, const FrequencyBand& band, const OptimizerOptions& options)
{
    const DiffusiveQuadrature raw = gauss_jacobi_init(L, alpha);
    const std::vector<double> samples = log_spaced_samples(band);
    const double cap = band.lambdaCap();

    // Clip the initializer into the open box (0, cap); both coordinates stay inside the safe range.
    const double vmax = kLogitBound - 1.0;
    Eigen::VectorXd x(2 * L);
    // Abscissae above the knee are compressed log-linearly into (knee, 0.9 cap) so that
    // distinct nodes stay distinct; identical poles would receive identical gradients forever.
    const double lambdaMax = 0.9 * cap;
    const double knee = band.omegaMax;
    const double largest = *std::max_element(raw.abscissae().begin(), raw.abscissae().end());
    const double power = largest > lambdaMax ? std::log(lambdaMax / knee) / std::log(largest / knee) : 1.0;
    for (int l = 0; l < L; ++l) {
        double zeta = raw.weights()[l];
        double lambda = raw.abscissae()[l];
        if (power < 1.0 && lambda > knee) {
            const double moved = knee * std::pow(lambda / knee, power);
            // Far above the band a pole acts like zeta lambda^(alpha-2) (i omega); keep that product.
            zeta *= std::pow(lambda / moved, alpha - 2.0);
            lambda = moved;
        }
        x(l) = std::clamp(std::log(zeta), -kLogWeightBound + 1.0, kLogWeightBound - 1.0);
        const double ratio = lambda / cap;
        x(L + l) = std::clamp(std::log(ratio / (1.0 - ratio)), -vmax, vmax);
    }
    const auto to_quad = [&](const Eigen::VectorXd& p) {
        Unpacked u = unpack(std::span<const double>(p.data(), p.size()), cap);
        return DiffusiveQuadrature(std::move(u.zeta), std::move(u.lambda), alpha, band);
    };
    const auto f = [&](const Eigen::VectorXd& p) {
        return objective_in_params(std::span<const double>(p.data(), p.size()), alpha, band, samples);
    };
    const auto grad = [&](const Eigen::VectorXd& p) {
        const auto g = objective_gradient(std::span<const double>(p.data(), p.size()), alpha, band, samples);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(g.data(), g.size()));
    };

    const DiffusiveQuadrature initial = to_quad(x);
    const double f0 = f(x);
    double fx = f0;
    Eigen::VectorXd g = grad(x);
    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(2 * L, 2 * L);
    bool scaled = false;
    std::deque<double> history{fx};
    int iter = 0;

    for (; iter < options.maxIterations; ++iter) {
        Eigen::VectorXd dir = -Hinv * g;
        double slope = g.dot(dir);
        if (!(slope < 0.0)) {
            Hinv.setIdentity();
            dir = -g;
            slope = -g.squaredNorm();
            if (!(slope < 0.0)) {
                break;
            }
        }

        // Backtracking with the Armijo condition; infeasible trial points evaluate to +inf.
        double step = 1.0;
        Eigen::VectorXd xn;
        double fn = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            xn = x + step * dir;
            fn = f(xn);
            if (fn <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (scaled) {
                // Curvature model went stale; restart from steepest descent once.
                Hinv.setIdentity();
                scaled = false;
                continue;
            }
            break;
        }

        const Eigen::VectorXd gn = grad(xn);
        const Eigen::VectorXd sv = xn - x;
        const Eigen::VectorXd yv = gn - g;
        const double sy = sv.dot(yv);
        if (sy > 1e-300) {
            if (!scaled) {
                Hinv *= sy / yv.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::VectorXd Hy = Hinv * yv;
            Hinv += (rho * rho * yv.dot(Hy) + rho) * (sv * sv.transpose()) -
                    rho * (Hy * sv.transpose() + sv * Hy.transpose());
        }
        x = xn;
        fx = fn;
        g = gn;

        // Feasibility holds by construction; the check guards the transform itself.
        require_feasible(to_quad(x));

        history.push_back(fx);
        if (static_cast<int>(history.size()) > options.stallWindow + 1) {
            history.pop_front();
        }
        if (static_cast<int>(history.size()) == options.stallWindow + 1) {
            const double old = history.front();
            if (old - fx <= options.relativeDecrease * old) {
                ++iter;
                break;
            }
        }
        if (fx == 0.0) {
            ++iter;
            break;
        }
    }

    const double rawObjective = objective(raw, alpha, samples);
    const double reference = std::min(f0, rawObjective);
    const bool improved = fx < reference;
    return QuadratureFit{improved ? to_quad(x) : initial, initial, reference, improved ? fx : f0, iter, improved};
}

DiffusiveQuadrature optimize_quadrature(double alpha, int L, const FrequencyBand& band,
                                        const OptimizerOptions& options)
{
    QuadratureFit fit = fit_quadrature(alpha, L, band, options);
    if (!fit.improved) {
        throw OptimizationError("quadrature optimization did not improve on the Gauss-Jacobi initializer",
                                fit.initial);
    }
    return fit.quadrature;
}

void write_quadrature(std::ostream& os, const DiffusiveQuadrature& quad)
{
    if (!quad.band()) {
        throw DomainError("only band-calibrated quadratures can be written");
    }
    const FrequencyBand& b = *quad.band();
    os << "# alpha=" << fmt_num(quad.alpha()) << " L=" << quad.size()
       << " omega_min=" << fmt_num(b.omegaMin) << " omega_max=" << fmt_num(b.omegaMax) << '\n';
    for (std::size_t l = 0; l < quad.size(); ++l) {
        os << fmt_num(quad.weights()[l]) << ' ' << fmt_num(quad.abscissae()[l]) << '\n';
    }
}

void write_quadrature(const std::string& path, const DiffusiveQuadrature& quad)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_quadrature(out, quad);
}

DiffusiveQuadrature read_quadrature(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
        throw DomainError("quadrature file must start with a '# alpha=...' header");
    }
    std::optional<double> alpha, wmin, wmax;
    std::optional<long> count;
    std::istringstream header(line.substr(2));
    std::string kv;
    while (header >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw DomainError("malformed header entry '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "alpha") {
            alpha = parse_num(val);
        } else if (key == "L") {
            count = std::stol(val);
        } else if (key == "omega_min") {
            wmin = parse_num(val);
        } else if (key == "omega_max") {
            wmax = parse_num(val);
        }
    }
    if (!alpha || !count || !wmin || !wmax) {
        throw DomainError("quadrature header must define alpha, L, omega_min and omega_max");
    }
    std::vector<double> zeta, lambda;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string a, b;
        if (!(row >> a >> b)) {
            throw DomainError("malformed quadrature row '" + line + "'");
        }
        zeta.push_back(parse_num(a));
        lambda.push_back(parse_num(b));
    }
    if (static_cast<long>(zeta.size()) != *count) {
        throw DomainError("quadrature file declares L=" + std::to_string(*count) + " but holds " +
                          std::to_string(zeta.size()) + " rows");
    }
    const int L = static_cast<int>(*count);
    return DiffusiveQuadrature(std::move(zeta), std::move(lambda), *alpha,
                               FrequencyBand(*wmin, *wmax, std::max(2, 2 * L)));
}

DiffusiveQuadrature read_quadrature(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_quadrature(in);
}

} // namespace colecole
