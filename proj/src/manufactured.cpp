#include "colecole/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace colecole {

namespace {
constexpr double pi = std::numbers::pi;
}

ManufacturedProblem::ManufacturedProblem(double alpha)
    : alpha_(alpha)
{
    require_fractional_order(alpha);
    scale_ = 1.0 / (std::tgamma(1.0 - alpha) * (1.0 - alpha));
}

double ManufacturedProblem::E(double x, double t) const
{
    const double g = 2.0 * std::pow(t, 2.0 - alpha_) * scale_ / (2.0 - alpha_);
    return std::cos(pi * x) * (g + t * t);
}

double ManufacturedProblem::H(double x, double t) const
{
    return pi * (2.0 * std::cos(pi * x) + std::sin(pi * x)) * t * t;
}

double ManufacturedProblem::P(double x, double t) const { return std::cos(pi * x) * t * t; }

double ManufacturedProblem::F1(double x, double t) const
{
    const double g = 2.0 * std::pow(t, 2.0 - alpha_) * scale_ / (2.0 - alpha_);
    return pi * std::sin(pi * x) * (g + t * t) + 2.0 * pi * (2.0 * std::cos(pi * x) + std::sin(pi * x)) * t;
}

double ManufacturedProblem::F2(double x, double t) const
{
    const double dg = 2.0 * std::pow(t, 1.0 - alpha_) * scale_;
    return std::cos(pi * x) * (dg + 4.0 * t) - pi * pi * (-2.0 * std::sin(pi * x) + std::cos(pi * x)) * t * t;
}

SourceSet ManufacturedProblem::sources() const
{
    SourceSet s;
    s.F1 = [*this](double x, double t) { return F1(x, t); };
    s.F2 = [*this](double x, double t) { return F2(x, t); };
    return s;
}

ScalarFunction ManufacturedProblem::exactE(double t) const
{
    return [*this, t](double x) { return E(x, t); };
}

ScalarFunction ManufacturedProblem::exactH(double t) const
{
    return [*this, t](double x) { return H(x, t); };
}

ScalarFunction ManufacturedProblem::exactP(double t) const
{
    return [*this, t](double x) { return P(x, t); };
}

double energy_initial_E(double x) { return std::cos(pi * x) * std::sin(pi * x); }

double energy_initial_H(double x) { return 2.0 * pi * std::cos(pi * x) + pi * std::sin(pi * x); }

} // namespace colecole
