/**
 * @file dg.hpp
 * @brief Periodic 1D DG space with an orthonormal Legendre basis, projections and the
 *        upwind-flux derivative operators of the Maxwell pair (H, E).
 */

#ifndef COLECOLE_DG_HPP
#define COLECOLE_DG_HPP

#include "colecole/material.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <utility>
#include <vector>

namespace colecole {

using ScalarFunction = std::function<double(double)>;

/// Uniform partition of [xMinus, xPlus] into `cells` intervals (cells >= 2).
class Mesh1D {
public:
    Mesh1D(double xMinus, double xPlus, int cells);

    double xMinus() const { return xMinus_; }
    double xPlus() const { return xPlus_; }
    int cells() const { return cells_; }
    double h() const { return h_; }
    double length() const { return xPlus_ - xMinus_; }

    /// Left endpoint of cell j (0-based).
    double cellLeft(int j) const { return xMinus_ + j * h_; }
    double cellRight(int j) const { return xMinus_ + (j + 1) * h_; }
    double cellCenter(int j) const { return xMinus_ + (j + 0.5) * h_; }
    /// Physical point of reference coordinate xi in [-1, 1] on cell j.
    double toPhysical(int j, double xi) const { return cellCenter(j) + 0.5 * h_ * xi; }
    /// Cell containing x, with x wrapped periodically into the domain.
    int locate(double x) const;

    bool operator==(const Mesh1D& other) const = default;

private:
    double xMinus_;
    double xPlus_;
    int cells_;
    double h_;
};

/// Orthonormal Legendre polynomials on [-1, 1]: phi_i = sqrt((2i+1)/2) P_i.
namespace legendre {
double value(int i, double xi);
double derivative(int i, double xi);
/// Closed-form phi_i(+1) and phi_i(-1).
double right(int i);
double left(int i);
} // namespace legendre

/**
 * @brief Piecewise polynomial of degree `degree` on a mesh, stored as modal coefficients.
 *
 * Coefficient (j, i) multiplies phi_i on cell j; storage is row-major by cell.
 */
class DgField {
public:
    DgField(const Mesh1D& mesh, int degree);
    DgField(const Mesh1D& mesh, int degree, Eigen::VectorXd coeffs);

    const Mesh1D& mesh() const { return mesh_; }
    int degree() const { return degree_; }
    int modes() const { return degree_ + 1; }
    Eigen::Index size() const { return coeffs_.size(); }

    Eigen::VectorXd& coeffs() { return coeffs_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    double& operator()(int cell, int mode) { return coeffs_(cell * modes() + mode); }
    double operator()(int cell, int mode) const { return coeffs_(cell * modes() + mode); }

    /// Value at reference coordinate xi of cell j.
    double evaluate(int cell, double xi) const;
    /// Value at physical x; at an interface the right cell's trace is returned.
    double operator()(double x) const;
    /// Trace at the right end (xi = +1) and left end (xi = -1) of cell j.
    double rightTrace(int cell) const;
    double leftTrace(int cell) const;

    /// Exact integral of the square over the domain, (h/2) * sum of squared coefficients.
    double squaredNorm() const;
    /// Exact L2 inner product.
    double dot(const DgField& other) const;

    bool compatible(const DgField& other) const;

    DgField& operator+=(const DgField& other);
    DgField& operator-=(const DgField& other);
    DgField& operator*=(double s);

    /// Field shifted by `by` cells: result cell j holds this field's cell j - by.
    DgField shiftedCells(int by) const;

private:
    Mesh1D mesh_;
    int degree_;
    Eigen::VectorXd coeffs_;
};

DgField operator+(DgField a, const DgField& b);
DgField operator-(DgField a, const DgField& b);
DgField operator*(double s, DgField a);

/**
 * @brief Cell-local L2 projection, moments computed with `points`-point Gauss-Legendre
 *        (k+2 when points <= 0).
 * @throws DomainError if degree < 1.
 */
DgField l2_project(const ScalarFunction& f, const Mesh1D& mesh, int degree, int points = 0);

enum class RadauSide { Plus, Minus };

/**
 * @brief Gauss-Radau projection: moments against P^{k-1} and the value at the left cell
 *        end (Plus) or the right cell end (Minus) match f.
 */
DgField gauss_radau_project(const ScalarFunction& f, const Mesh1D& mesh, int degree, RadauSide side,
                            int points = 0);

/**
 * @brief Initial E and H built from characteristic combinations, so that the projection
 *        errors of the upwind fluxes vanish:
 *        E_h = 1/2 P+(E + Z H) + 1/2 P-(E - Z H),  H_h = 1/2 P+(H + E/Z) + 1/2 P-(H - E/Z),
 *        with Z = sqrt(mu0 / (eps0 eps_inf)).
 * @return (E_h, H_h)
 */
std::pair<DgField, DgField> project_initial_EH(const ScalarFunction& E0, const ScalarFunction& H0,
                                               const MaterialParams& params, const Mesh1D& mesh, int degree);

/// Upwind numerical traces at face j+1/2, the right end of cell j (periodic).
struct FaceFlux {
    double eHat;
    double hHat;
};

/// E^ = {E} + Z/2 [H],  H^ = {H} + 1/(2Z) [E], with [v] = v(right cell) - v(left cell).
std::vector<FaceFlux> upwind_face_values(const DgField& E, const DgField& H, const MaterialParams& params);

/// Per-face dissipation 1/2 (Z [H]^2 + [E]^2 / Z) >= 0, one entry per face j+1/2.
std::vector<double> face_dissipation(const DgField& H, const DgField& E, const MaterialParams& params);

/**
 * @brief Semi-discrete derivative operators with upwind coupling.
 *
 * For the pair (H, E):
 *   mu0 dH/dt = derivativeE(H, E) + P F1,
 *   eps0 eps_inf dE/dt + dP/dt = derivativeH(H, E) + P F2,
 * where each result is the mass-inverted weak derivative
 *   (2/h) [ -int U v' + U^ v^-|_{j+1/2} - U^ v^+|_{j-1/2} ].
 * Both act on the pair because the upwind traces mix the two fields.
 * The assembled matrix acts on the stacked coefficient vector [H; E].
 */
class DgOperators {
public:
    DgOperators(const Mesh1D& mesh, int degree, const MaterialParams& params);

    const Mesh1D& mesh() const { return mesh_; }
    int degree() const { return degree_; }
    /// Unknowns per field, cells * (degree + 1).
    int fieldSize() const { return mesh_.cells() * (degree_ + 1); }
    const MaterialParams& params() const { return params_; }

    DgField derivativeE(const DgField& H, const DgField& E) const;
    DgField derivativeH(const DgField& H, const DgField& E) const;

    /// 2N x 2N operator; rows [0,N) give derivativeE, rows [N,2N) give derivativeH.
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

    DgField zeroField() const { return DgField(mesh_, degree_); }

private:
    Mesh1D mesh_;
    int degree_;
    MaterialParams params_;
    Eigen::SparseMatrix<double> matrix_;
};

} // namespace colecole

#endif // COLECOLE_DG_HPP
