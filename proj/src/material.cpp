#include "colecole/material.hpp"

#include "colecole/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace colecole {

void require_fractional_order(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("fractional order must lie in (0,1), got " + std::to_string(alpha));
    }
}

MaterialParams::MaterialParams(double eps0, double epsInf, double epsS, double mu0, double tau0,
                               double alpha)
    : eps0_(eps0), epsInf_(epsInf), epsS_(epsS), mu0_(mu0), tau0_(tau0), alpha_(alpha)
{
    require_fractional_order(alpha);
    if (!(epsInf > 0.0) || !(epsS > epsInf)) {
        throw DomainError("need eps_s > eps_inf > 0");
    }
    if (!(eps0 > 0.0) || !(mu0 > 0.0) || !(tau0 > 0.0)) {
        throw DomainError("eps0, mu0 and tau0 must be strictly positive");
    }
}

MaterialParams MaterialParams::unit(double alpha)
{
    return MaterialParams(1.0, 1.0, 2.0, 1.0, 1.0, alpha);
}

double MaterialParams::tauAlpha() const { return std::pow(tau0_, alpha_); }

double MaterialParams::impedance() const { return std::sqrt(mu0_ / eps()); }

MaterialParams MaterialParams::withAlpha(double alpha) const
{
    return MaterialParams(eps0_, epsInf_, epsS_, mu0_, tau0_, alpha);
}

double sinc_alpha(double alpha) { return std::sin(std::numbers::pi * alpha) / std::numbers::pi; }

double kernel_density(double lambda, double alpha)
{
    require_fractional_order(alpha);
    if (!(lambda > 0.0)) {
        throw DomainError("kernel density needs lambda > 0");
    }
    return sinc_alpha(alpha) * std::pow(lambda, alpha - 1.0);
}

double caputo_power(double p, double alpha, double t)
{
    require_fractional_order(alpha);
    if (!(p > 0.0)) {
        throw DomainError("caputo_power needs p > 0");
    }
    if (!(t >= 0.0)) {
        throw DomainError("caputo_power needs t >= 0");
    }
    // Gamma ratio through lgamma keeps large p finite.
    const double ratio = std::exp(std::lgamma(p + 1.0) - std::lgamma(p + 1.0 - alpha));
    if (t == 0.0) {
        if (p > alpha) {
            return 0.0;
        }
        return p == alpha ? ratio : std::numeric_limits<double>::infinity();
    }
    return ratio * std::pow(t, p - alpha);
}

} // namespace colecole
