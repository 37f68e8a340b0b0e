#include "colecole/errors.hpp"
#include "colecole/gauss_jacobi.hpp"
#include "colecole/quadopt.hpp"
#include "support.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

using namespace colecole;
using cd = std::complex<double>;

namespace {

// Direct evaluation of the quadrature symbol ratio, written independently of the library.
cd chi_reference(double w, const std::vector<double>& z, const std::vector<double>& l, double a)
{
    const cd iw(0.0, w);
    cd sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        sum += z[i] * std::pow(l[i], a - 1.0) / (iw + l[i]);
    }
    const cd B = std::sin(std::numbers::pi * a) / std::numbers::pi * iw * sum;
    return B / std::polar(std::pow(w, a), std::numbers::pi * a / 2.0);
}

void expect_feasible(const DiffusiveQuadrature& q, double cap)
{
    for (std::size_t l = 0; l < q.size(); ++l) {
        EXPECT_GT(q.weights()[l], 0.0);
        EXPECT_GT(q.abscissae()[l], 0.0);
        EXPECT_LT(q.abscissae()[l], cap);
    }
}

} // namespace

TEST(FrequencyBand, Invariants)
{
    EXPECT_THROW(FrequencyBand(0.0, 1.0, 4), DomainError);
    EXPECT_THROW(FrequencyBand(2.0, 1.0, 4), DomainError);
    EXPECT_THROW(FrequencyBand(1.0, 2.0, 1), DomainError);
    EXPECT_DOUBLE_EQ(FrequencyBand(0.5, 5.0, 4).lambdaCap(), 50.0);
}

TEST(LogSpacedSamples, Examples)
{
    const auto a = log_spaced_samples(FrequencyBand(1.0, 100.0, 3));
    ASSERT_EQ(a.size(), 3u);
    EXPECT_DOUBLE_EQ(a[0], 1.0);
    EXPECT_NEAR(a[1], 10.0, 1e-13);
    EXPECT_DOUBLE_EQ(a[2], 100.0);

    const auto b = log_spaced_samples(FrequencyBand(0.5, 5.0, 2));
    ASSERT_EQ(b.size(), 2u);
    EXPECT_DOUBLE_EQ(b[0], 0.5);
    EXPECT_DOUBLE_EQ(b[1], 5.0);

    const auto c = log_spaced_samples(FrequencyBand(0.5, 5.0, 3));
    EXPECT_NEAR(c[1], 0.5 * std::sqrt(10.0), 1e-14);
}

TEST(LogSpacedSamples, GeometricProgression)
{
    const auto s = log_spaced_samples(FrequencyBand(0.3, 700.0, 37));
    const double ratio = s[1] / s[0];
    for (std::size_t i = 1; i < s.size(); ++i) {
        EXPECT_NEAR(s[i] / s[i - 1], ratio, 1e-12);
    }
}

TEST(GaussJacobi, IntegratesPolynomialsExactly)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (auto [a, b] : {std::pair{0.0, 0.0}, {1.0, 1.0}, {2.2, -0.2}, {-0.6, 2.6}, {0.5, 1.5}}) {
        for (int n : {1, 2, 5, 9}) {
            const GaussRule rule = gauss_jacobi(n, a, b);
            ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(n));
            EXPECT_TRUE(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
            for (int p = 0; p <= 2 * n - 1; ++p) {
                // Two-argument form: xc is the distance to the nearer endpoint, so the
                // singular factors are evaluated without cancellation.
                const double exact = integrator.integrate(
                    [&](double x, double xc) {
                        const double right = x > 0.0 ? xc : 1.0 - x;
                        const double left = x < 0.0 ? -xc : 1.0 + x;
                        return std::pow(right, a) * std::pow(left, b) * std::pow(x, p);
                    },
                    -1.0, 1.0);
                double q = 0.0;
                for (int i = 0; i < n; ++i) {
                    EXPECT_GT(rule.weights[i], 0.0);
                    q += rule.weights[i] * std::pow(rule.nodes[i], p);
                }
                EXPECT_NEAR(q, exact, 1e-11 * std::max(1.0, std::abs(exact))) << "a=" << a << " b=" << b
                                                                               << " n=" << n << " p=" << p;
            }
        }
    }
}

TEST(GaussJacobi, RejectsBadArguments)
{
    EXPECT_THROW(gauss_jacobi(0, 0.0, 0.0), DomainError);
    EXPECT_THROW(gauss_jacobi(3, -1.0, 0.0), DomainError);
}

TEST(GaussJacobiInit, SinglePointAtHalf)
{
    // Weight 1 - x^2: the one-point node is the first-moment ratio 0, mass 4/3.
    const DiffusiveQuadrature q = gauss_jacobi_init(1, 0.5);
    ASSERT_EQ(q.size(), 1u);
    EXPECT_NEAR(q.abscissae()[0], 1.0, 1e-14);
    EXPECT_NEAR(q.weights()[0], 16.0 / 3.0, 1e-13);
}

TEST(GaussJacobiInit, PositiveForAllOrders)
{
    for (double a : {0.05, 0.3, 0.5, 0.7, 0.95}) {
        for (int L : {1, 2, 5, 10, 20, 40}) {
            const DiffusiveQuadrature q = gauss_jacobi_init(L, a);
            ASSERT_EQ(q.size(), static_cast<std::size_t>(L));
            for (std::size_t l = 0; l < q.size(); ++l) {
                EXPECT_GT(q.weights()[l], 0.0);
                EXPECT_GT(q.abscissae()[l], 0.0);
            }
        }
    }
}

TEST(GaussJacobiInit, ConvergesToExactSymbol)
{
    // A large rule approximates the full diffusive integral, so chi tends to one mid-range.
    const DiffusiveQuadrature q = gauss_jacobi_init(200, 0.5);
    const auto grid = log_grid(0.5, 5.0, 50);
    EXPECT_LT(max_chi_error(q, 0.5, grid), 1e-3);
}

TEST(Chi, SinglePoleExample)
{
    const DiffusiveQuadrature q({std::numbers::pi}, {1.0}, 0.5);
    const cd c = chi(1.0, q, 0.5);
    const cd expected = cd(0.0, 1.0) / cd(1.0, 1.0) * std::polar(1.0, -std::numbers::pi / 4.0);
    EXPECT_NEAR(std::abs(c - expected), 0.0, 1e-15);
    EXPECT_NEAR(c.real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(c.imag(), 0.0, 1e-15);
}

TEST(Chi, MatchesIndependentEvaluation)
{
    auto gen = test::rng(2);
    std::uniform_real_distribution<double> a(0.05, 0.95), w(-2.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double alpha = a(gen);
        const DiffusiveQuadrature q = test::random_quadrature(7, alpha, gen);
        const double omega = std::pow(10.0, w(gen));
        const cd ref = chi_reference(omega, q.weights(), q.abscissae(), alpha);
        EXPECT_NEAR(std::abs(chi(omega, q, alpha) - ref), 0.0, 1e-13 * std::max(1.0, std::abs(ref)));
    }
}

TEST(Chi, VanishingWeightsGiveZero)
{
    const DiffusiveQuadrature q({1e-300, 1e-300}, {1.0, 3.0}, 0.4);
    EXPECT_LT(std::abs(chi(2.0, q, 0.4)), 1e-290);
    const auto samples = log_spaced_samples(FrequencyBand(0.5, 5.0, 12));
    EXPECT_NEAR(objective(q, 0.4, samples), 12.0, 1e-12);
}

TEST(Objective, SumOfSquaredDeviations)
{
    auto gen = test::rng(3);
    const DiffusiveQuadrature q = test::random_quadrature(4, 0.6, gen);
    const auto samples = log_spaced_samples(FrequencyBand(0.5, 5.0, 9));
    double ref = 0.0;
    for (double w : samples) {
        ref += std::norm(chi_reference(w, q.weights(), q.abscissae(), 0.6) - 1.0);
    }
    EXPECT_NEAR(objective(q, 0.6, samples), ref, 1e-12 * ref);
}

TEST(ObjectiveGradient, MatchesCentralDifferences)
{
    auto gen = test::rng(4);
    std::uniform_real_distribution<double> u(-2.0, 1.0), v(-3.0, 3.0);
    for (double alpha : {0.3, 0.5, 0.7}) {
        const int L = 6;
        const FrequencyBand band(0.5, 5.0, 2 * L);
        const auto samples = log_spaced_samples(band);
        std::vector<double> x(2 * L);
        for (int i = 0; i < L; ++i) {
            x[i] = u(gen);
            x[L + i] = v(gen);
        }
        const std::vector<double> g = objective_gradient(x, alpha, band, samples);
        ASSERT_EQ(g.size(), x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double h = 1e-6;
            std::vector<double> xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (objective_in_params(xp, alpha, band, samples) -
                               objective_in_params(xm, alpha, band, samples)) /
                              (2.0 * h);
            EXPECT_NEAR(g[i], fd, 1e-6 * std::max(1.0, std::abs(fd))) << "alpha=" << alpha << " i=" << i;
        }
    }
}

TEST(FitQuadrature, FeasibleAndImproved)
{
    for (double alpha : {0.3, 0.5, 0.7}) {
        for (int L : {1, 5, 10, 20}) {
            const FrequencyBand band(0.5, 5.0, 2 * L);
            const QuadratureFit fit = fit_quadrature(alpha, L, band);
            expect_feasible(fit.quadrature, band.lambdaCap());
            expect_feasible(fit.initial, band.lambdaCap());
            EXPECT_TRUE(fit.improved);
            const auto samples = log_spaced_samples(band);
            EXPECT_LT(objective(fit.quadrature, alpha, samples), objective(fit.initial, alpha, samples));
            EXPECT_LE(objective(fit.quadrature, alpha, samples),
                      objective(gauss_jacobi_init(L, alpha), alpha, samples));
            EXPECT_NEAR(fit.finalObjective, objective(fit.quadrature, alpha, samples), 1e-12);
        }
    }
}

TEST(FitQuadrature, InitializerObjectiveExceedsOptimized)
{
    const FrequencyBand band(0.5, 5.0, 40);
    const auto samples = log_spaced_samples(band);
    const double init = objective(gauss_jacobi_init(20, 0.5), 0.5, samples);
    const DiffusiveQuadrature q = optimize_quadrature(0.5, 20, band);
    EXPECT_TRUE(std::isfinite(init));
    EXPECT_GT(init, 0.0);
    EXPECT_GT(init, objective(q, 0.5, samples));
}

TEST(FitQuadrature, MaxErrorDropsOnPlottingRange)
{
    const FrequencyBand band(0.5, 5.0, 40);
    const QuadratureFit fit = fit_quadrature(0.5, 20, band);
    const auto grid = log_grid(0.25, 10.0, 400);
    EXPECT_LT(max_chi_error(fit.quadrature, 0.5, grid), max_chi_error(fit.initial, 0.5, grid));
}

TEST(FitQuadrature, SinglePoleBeatsBruteForceScan)
{
    const FrequencyBand band(1.0, 1.0 + 1e-3, 2);
    const auto samples = log_spaced_samples(band);
    const QuadratureFit fit = fit_quadrature(0.5, 1, band);
    const double fitted = objective(fit.quadrature, 0.5, samples);
    EXPECT_LT(fitted, 2.0);

    double best = 2.0;
    for (int i = 0; i <= 400; ++i) {
        const double zeta = std::pow(10.0, -3.0 + 6.0 * i / 400.0);
        for (int j = 1; j < 400; ++j) {
            const double lambda = band.lambdaCap() * j / 400.0;
            best = std::min(best, objective(DiffusiveQuadrature({zeta}, {lambda}, 0.5), 0.5, samples));
        }
    }
    EXPECT_LE(fitted, best * (1.0 + 1e-6) + 1e-14);
}

TEST(FitQuadrature, ErrorNonIncreasingInL)
{
    const auto grid = log_grid(0.25, 10.0, 400);
    double previous = std::numeric_limits<double>::infinity();
    for (int L : {5, 10, 20}) {
        const QuadratureFit fit = fit_quadrature(0.5, L, FrequencyBand(0.5, 5.0, 2 * L));
        const double err = max_chi_error(fit.quadrature, 0.5, grid);
        EXPECT_LE(err, 1.1 * previous) << "L=" << L;
        previous = err;
    }
}

TEST(OptimizeQuadrature, NoIterationsReportsFallback)
{
    OptimizerOptions none;
    none.maxIterations = 0;
    const FrequencyBand band(0.5, 5.0, 10);
    try {
        optimize_quadrature(0.5, 5, band, none);
        FAIL() << "expected OptimizationError";
    } catch (const OptimizationError& e) {
        expect_feasible(e.fallback(), band.lambdaCap());
        EXPECT_EQ(e.fallback().size(), 5u);
    }
}

TEST(QuadratureFile, RoundTripsBitExact)
{
    const QuadratureFit fit = fit_quadrature(0.3, 10, FrequencyBand(0.5, 5.0, 20));
    std::stringstream ss;
    write_quadrature(ss, fit.quadrature);
    const DiffusiveQuadrature back = read_quadrature(ss);
    EXPECT_EQ(back.weights(), fit.quadrature.weights());
    EXPECT_EQ(back.abscissae(), fit.quadrature.abscissae());
    EXPECT_EQ(back.alpha(), 0.3);
    ASSERT_TRUE(back.band().has_value());
    EXPECT_EQ(back.band()->omegaMin, 0.5);
    EXPECT_EQ(back.band()->omegaMax, 5.0);
}

TEST(QuadratureFile, RejectsMalformedInput)
{
    {
        std::istringstream in("1 2\n");
        EXPECT_THROW(read_quadrature(in), DomainError);
    }
    {
        std::istringstream in("# alpha=0.5 L=2 omega_min=0.5 omega_max=5\n1 2\n");
        EXPECT_THROW(read_quadrature(in), DomainError);
    }
    {
        std::istringstream in("# alpha=0.5 L=1 omega_min=0.5 omega_max=5\n1 2x\n");
        EXPECT_THROW(read_quadrature(in), DomainError);
    }
    {
        // Abscissa above the cap 10 * omega_max.
        std::istringstream in("# alpha=0.5 L=1 omega_min=0.5 omega_max=5\n1 60\n");
        EXPECT_THROW(read_quadrature(in), DomainError);
    }
    {
        std::istringstream in("# alpha=0.5 L=1 omega_min=0.5 omega_max=5\n-1 2\n");
        EXPECT_THROW(read_quadrature(in), DomainError);
    }
}

TEST(DiffusiveQuadrature, RejectsInfeasible)
{
    EXPECT_THROW(DiffusiveQuadrature({1.0}, {0.0}, 0.5), DomainError);
    EXPECT_THROW(DiffusiveQuadrature({0.0}, {1.0}, 0.5), DomainError);
    EXPECT_THROW(DiffusiveQuadrature({1.0, 2.0}, {1.0}, 0.5), DomainError);
    EXPECT_THROW(DiffusiveQuadrature({}, {}, 0.5), DomainError);
    EXPECT_THROW(DiffusiveQuadrature({1.0}, {51.0}, 0.5, FrequencyBand(0.5, 5.0, 2)), DomainError);
}
