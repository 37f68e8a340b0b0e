#include "colecole/gauss_jacobi.hpp"

#include "colecole/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>

namespace colecole {

GaussRule gauss_jacobi(int n, double a, double b)
{
    if (n < 1) {
        throw DomainError("Gauss-Jacobi rule needs at least one node");
    }
    if (!(a > -1.0) || !(b > -1.0)) {
        throw DomainError("Gauss-Jacobi exponents must exceed -1");
    }

    Eigen::VectorXd diag(n);
    Eigen::VectorXd offdiag(n > 1 ? n - 1 : 0);
    const double ab = a + b;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double beta;
        if (k == 1) {
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        offdiag(k - 1) = std::sqrt(beta);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw SolveError("Gauss-Jacobi eigenproblem did not converge");
    }

    // Total mass of the weight function.
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                                std::lgamma(ab + 2.0));

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()(k);
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

const GaussRule& gauss_legendre_cached(int n)
{
    thread_local std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, gauss_jacobi(n, 0.0, 0.0)).first;
    }
    return it->second;
}

GaussRule gauss_legendre(int n) { return gauss_legendre_cached(n); }

} // namespace colecole
