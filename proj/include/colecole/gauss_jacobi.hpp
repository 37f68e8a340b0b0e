#ifndef COLECOLE_GAUSS_JACOBI_HPP
#define COLECOLE_GAUSS_JACOBI_HPP

#include <vector>

namespace colecole {

/// Nodes in ascending order with matching positive weights.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/**
 * @brief n-point Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1,1].
 *
 * Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix built from the
 * three-term recurrence; weights come from the first eigenvector components.
 * @throws DomainError for n < 1 or a, b <= -1; SolveError if the eigensolver fails.
 */
GaussRule gauss_jacobi(int n, double a, double b);

/// Gauss-Legendre rule, the a = b = 0 case.
GaussRule gauss_legendre(int n);
/// Same rule, computed once per thread and kept.
const GaussRule& gauss_legendre_cached(int n);

} // namespace colecole

#endif // COLECOLE_GAUSS_JACOBI_HPP
