/**
 * @file material.hpp
 * @brief Cole-Cole material constants and closed-form fractional-calculus helpers.
 */

#ifndef COLECOLE_MATERIAL_HPP
#define COLECOLE_MATERIAL_HPP

namespace colecole {

/**
 * @brief Physical constants of a Cole-Cole medium.
 *
 * The relative permittivity in the frequency domain is
 * eps_inf + (eps_s - eps_inf) / (1 + (i omega tau0)^alpha).
 * Construction validates every invariant, so downstream code never re-checks them.
 */
class MaterialParams {
public:
    /// @throws DomainError unless 0 < alpha < 1, eps_s > eps_inf > 0 and eps0, mu0, tau0 > 0.
    MaterialParams(double eps0, double epsInf, double epsS, double mu0, double tau0, double alpha);

    /// tau0 = mu0 = eps0*eps_inf = eps0*(eps_s - eps_inf) = 1.
    static MaterialParams unit(double alpha);

    double eps0() const { return eps0_; }
    double epsInf() const { return epsInf_; }
    double epsS() const { return epsS_; }
    double mu0() const { return mu0_; }
    double tau0() const { return tau0_; }
    double alpha() const { return alpha_; }

    /// eps0 * eps_inf, the instantaneous permittivity.
    double eps() const { return eps0_ * epsInf_; }
    /// eps0 * (eps_s - eps_inf), the polarization strength.
    double deltaEps() const { return eps0_ * (epsS_ - epsInf_); }
    /// tau0^alpha
    double tauAlpha() const;
    /// sqrt(mu0 / (eps0 eps_inf)); scales the H jump in the E flux.
    double impedance() const;
    /// Same material with a different fractional order.
    MaterialParams withAlpha(double alpha) const;

private:
    double eps0_;
    double epsInf_;
    double epsS_;
    double mu0_;
    double tau0_;
    double alpha_;
};

/// sin(pi alpha) / pi
double sinc_alpha(double alpha);

/**
 * @brief Density of the diffusive measure, sin(pi alpha)/pi * lambda^(alpha-1).
 * @throws DomainError if lambda <= 0 or alpha is outside (0,1).
 */
double kernel_density(double lambda, double alpha);

/**
 * @brief Caputo derivative of order alpha of t^p:
 * Gamma(p+1)/Gamma(p+1-alpha) * t^(p-alpha).
 * @throws DomainError if p <= 0, alpha outside (0,1) or t < 0.
 */
double caputo_power(double p, double alpha, double t);

void require_fractional_order(double alpha);

} // namespace colecole

#endif // COLECOLE_MATERIAL_HPP
