/**
 * @file manufactured.hpp
 * @brief Closed-form test problems on [0, 2] with unit material constants.
 *
 * Accuracy problem (F3 = 0), with g(t) the Caputo derivative of t^2:
 *   E = cos(pi x) (g(t) + t^2),  H = pi (2 cos(pi x) + sin(pi x)) t^2,  P = cos(pi x) t^2.
 */

#ifndef COLECOLE_MANUFACTURED_HPP
#define COLECOLE_MANUFACTURED_HPP

#include "colecole/dg.hpp"
#include "colecole/stepper.hpp"

namespace colecole {

class ManufacturedProblem {
public:
    explicit ManufacturedProblem(double alpha);

    double alpha() const { return alpha_; }
    /// Unit constants: eps0 = eps_inf = mu0 = tau0 = 1, eps_s = 2.
    MaterialParams params() const { return MaterialParams::unit(alpha_); }

    double E(double x, double t) const;
    double H(double x, double t) const;
    double P(double x, double t) const;
    double F1(double x, double t) const;
    double F2(double x, double t) const;

    SourceSet sources() const;
    ScalarFunction exactE(double t) const;
    ScalarFunction exactH(double t) const;
    ScalarFunction exactP(double t) const;

private:
    double alpha_;
    // 1 / (Gamma(1 - alpha) (1 - alpha)), shared by g and g'.
    double scale_;
};

/// Initial data of the energy experiment: E0 = cos(pi x) sin(pi x), H0 = 2 pi cos(pi x) + pi sin(pi x).
double energy_initial_E(double x);
double energy_initial_H(double x);

} // namespace colecole

#endif // COLECOLE_MANUFACTURED_HPP
