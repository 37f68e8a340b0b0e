#include "colecole/dg.hpp"

#include "colecole/errors.hpp"
#include "colecole/gauss_jacobi.hpp"

#include <algorithm>
#include <cmath>

namespace colecole {

Mesh1D::Mesh1D(double xMinus, double xPlus, int cells)
    : xMinus_(xMinus), xPlus_(xPlus), cells_(cells), h_((xPlus - xMinus) / cells)
{
    if (!(xPlus > xMinus)) {
        throw DomainError("mesh needs x_plus > x_minus");
    }
    if (cells < 2) {
        throw DomainError("mesh needs at least two cells");
    }
}

int Mesh1D::locate(double x) const
{
    const double L = length();
    double y = std::fmod(x - xMinus_, L);
    if (y < 0.0) {
        y += L;
    }
    const int j = static_cast<int>(std::floor(y / h_));
    return std::clamp(j, 0, cells_ - 1);
}

namespace legendre {

double value(int i, double xi)
{
    double p0 = 1.0;
    double p1 = xi;
    if (i == 0) {
        return std::sqrt(0.5);
    }
    for (int n = 1; n < i; ++n) {
        const double p2 = ((2.0 * n + 1.0) * xi * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return std::sqrt((2.0 * i + 1.0) / 2.0) * p1;
}

double derivative(int i, double xi)
{
    if (i == 0) {
        return 0.0;
    }
    // P'_{n+1} = P'_{n-1} + (2n+1) P_n
    double p0 = 1.0, p1 = xi;
    double d0 = 0.0, d1 = 1.0;
    for (int n = 1; n < i; ++n) {
        const double p2 = ((2.0 * n + 1.0) * xi * p1 - n * p0) / (n + 1.0);
        const double d2 = d0 + (2.0 * n + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    return std::sqrt((2.0 * i + 1.0) / 2.0) * d1;
}

double right(int i) { return std::sqrt((2.0 * i + 1.0) / 2.0); }

double left(int i) { return (i % 2 == 0 ? 1.0 : -1.0) * right(i); }

} // namespace legendre

DgField::DgField(const Mesh1D& mesh, int degree)
    : mesh_(mesh), degree_(degree), coeffs_(Eigen::VectorXd::Zero(mesh.cells() * (degree + 1)))
{
    if (degree < 1) {
        throw DomainError("DG degree must be at least 1");
    }
}

DgField::DgField(const Mesh1D& mesh, int degree, Eigen::VectorXd coeffs)
    : mesh_(mesh), degree_(degree), coeffs_(std::move(coeffs))
{
    if (degree < 1) {
        throw DomainError("DG degree must be at least 1");
    }
    if (coeffs_.size() != mesh.cells() * (degree + 1)) {
        throw DomainError("coefficient count does not match mesh and degree");
    }
}

double DgField::evaluate(int cell, double xi) const
{
    double sum = 0.0;
    for (int i = 0; i <= degree_; ++i) {
        sum += (*this)(cell, i) * legendre::value(i, xi);
    }
    return sum;
}

double DgField::operator()(double x) const
{
    const double L = mesh_.length();
    double y = std::fmod(x - mesh_.xMinus(), L);
    if (y < 0.0) {
        y += L;
    }
    y += mesh_.xMinus();
    const int j = mesh_.locate(y);
    const double xi = 2.0 * (y - mesh_.cellCenter(j)) / mesh_.h();
    return evaluate(j, std::clamp(xi, -1.0, 1.0));
}

double DgField::rightTrace(int cell) const
{
    double sum = 0.0;
    for (int i = 0; i <= degree_; ++i) {
        sum += (*this)(cell, i) * legendre::right(i);
    }
    return sum;
}

double DgField::leftTrace(int cell) const
{
    double sum = 0.0;
    for (int i = 0; i <= degree_; ++i) {
        sum += (*this)(cell, i) * legendre::left(i);
    }
    return sum;
}

double DgField::squaredNorm() const { return 0.5 * mesh_.h() * coeffs_.squaredNorm(); }

double DgField::dot(const DgField& other) const
{
    if (!compatible(other)) {
        throw DomainError("inner product of incompatible DG fields");
    }
    return 0.5 * mesh_.h() * coeffs_.dot(other.coeffs_);
}

bool DgField::compatible(const DgField& other) const
{
    return degree_ == other.degree_ && mesh_ == other.mesh_;
}

DgField& DgField::operator+=(const DgField& other)
{
    if (!compatible(other)) {
        throw DomainError("adding incompatible DG fields");
    }
    coeffs_ += other.coeffs_;
    return *this;
}

DgField& DgField::operator-=(const DgField& other)
{
    if (!compatible(other)) {
        throw DomainError("subtracting incompatible DG fields");
    }
    coeffs_ -= other.coeffs_;
    return *this;
}

DgField& DgField::operator*=(double s)
{
    coeffs_ *= s;
    return *this;
}

DgField DgField::shiftedCells(int by) const
{
    DgField out(mesh_, degree_);
    const int M = mesh_.cells();
    for (int j = 0; j < M; ++j) {
        const int src = ((j - by) % M + M) % M;
        out.coeffs_.segment(j * modes(), modes()) = coeffs_.segment(src * modes(), modes());
    }
    return out;
}

DgField operator+(DgField a, const DgField& b) { return a += b; }
DgField operator-(DgField a, const DgField& b) { return a -= b; }
DgField operator*(double s, DgField a) { return a *= s; }

namespace {

int resolve_points(int degree, int points) { return points > 0 ? points : degree + 2; }

} // namespace

DgField l2_project(const ScalarFunction& f, const Mesh1D& mesh, int degree, int points)
{
    DgField out(mesh, degree);
    const GaussRule& rule = gauss_legendre_cached(resolve_points(degree, points));
    const int q = static_cast<int>(rule.nodes.size());
    std::vector<double> phi(q * (degree + 1));
    for (int p = 0; p < q; ++p) {
        for (int i = 0; i <= degree; ++i) {
            phi[p * (degree + 1) + i] = legendre::value(i, rule.nodes[p]);
        }
    }
    for (int j = 0; j < mesh.cells(); ++j) {
        for (int p = 0; p < q; ++p) {
            const double fw = f(mesh.toPhysical(j, rule.nodes[p])) * rule.weights[p];
            for (int i = 0; i <= degree; ++i) {
                out(j, i) += fw * phi[p * (degree + 1) + i];
            }
        }
    }
    return out;
}

DgField gauss_radau_project(const ScalarFunction& f, const Mesh1D& mesh, int degree, RadauSide side, int points)
{
    // The k moment rows against phi_0..phi_{k-1} fix those coefficients directly in an
    // orthonormal basis; the endpoint row then determines the top coefficient.
    DgField out = l2_project(f, mesh, degree, points);
    const bool plus = side == RadauSide::Plus;
    for (int j = 0; j < mesh.cells(); ++j) {
        const double target = f(plus ? mesh.cellLeft(j) : mesh.cellRight(j));
        double partial = 0.0;
        for (int i = 0; i < degree; ++i) {
            partial += out(j, i) * (plus ? legendre::left(i) : legendre::right(i));
        }
        const double top = plus ? legendre::left(degree) : legendre::right(degree);
        out(j, degree) = (target - partial) / top;
    }
    return out;
}

std::pair<DgField, DgField> project_initial_EH(const ScalarFunction& E0, const ScalarFunction& H0,
                                               const MaterialParams& params, const Mesh1D& mesh, int degree)
{
    const double Z = params.impedance();
    const auto combo = [](const ScalarFunction& a, const ScalarFunction& b, double s) {
        return ScalarFunction([a, b, s](double x) { return a(x) + s * b(x); });
    };
    DgField E = 0.5 * gauss_radau_project(combo(E0, H0, Z), mesh, degree, RadauSide::Plus) +
                0.5 * gauss_radau_project(combo(E0, H0, -Z), mesh, degree, RadauSide::Minus);
    DgField H = 0.5 * gauss_radau_project(combo(H0, E0, 1.0 / Z), mesh, degree, RadauSide::Plus) +
                0.5 * gauss_radau_project(combo(H0, E0, -1.0 / Z), mesh, degree, RadauSide::Minus);
    return {std::move(E), std::move(H)};
}

std::vector<FaceFlux> upwind_face_values(const DgField& E, const DgField& H, const MaterialParams& params)
{
    if (!E.compatible(H)) {
        throw DomainError("upwind flux of incompatible DG fields");
    }
    const double Z = params.impedance();
    const int M = E.mesh().cells();
    std::vector<FaceFlux> out(M);
    for (int j = 0; j < M; ++j) {
        const int r = (j + 1) % M;
        const double eMinus = E.rightTrace(j), ePlus = E.leftTrace(r);
        const double hMinus = H.rightTrace(j), hPlus = H.leftTrace(r);
        out[j].eHat = 0.5 * (eMinus + ePlus) + 0.5 * Z * (hPlus - hMinus);
        out[j].hHat = 0.5 * (hMinus + hPlus) + 0.5 / Z * (ePlus - eMinus);
    }
    return out;
}

std::vector<double> face_dissipation(const DgField& H, const DgField& E, const MaterialParams& params)
{
    if (!E.compatible(H)) {
        throw DomainError("face dissipation of incompatible DG fields");
    }
    const double Z = params.impedance();
    const int M = E.mesh().cells();
    std::vector<double> out(M);
    for (int j = 0; j < M; ++j) {
        const int r = (j + 1) % M;
        const double jumpH = H.leftTrace(r) - H.rightTrace(j);
        const double jumpE = E.leftTrace(r) - E.rightTrace(j);
        out[j] = 0.5 * (Z * jumpH * jumpH + jumpE * jumpE / Z);
    }
    return out;
}

DgOperators::DgOperators(const Mesh1D& mesh, int degree, const MaterialParams& params)
    : mesh_(mesh), degree_(degree), params_(params)
{
    if (degree < 1) {
        throw DomainError("DG degree must be at least 1");
    }
    const int K = degree + 1;
    const int M = mesh.cells();
    const int N = M * K;
    const double scale = 2.0 / mesh.h();

    // stiffness(m, i) = int_{-1}^{1} phi_m phi_i' dxi, exact with k+2 points.
    const GaussRule& rule = gauss_legendre_cached(degree + 2);
    Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(K, K);
    for (std::size_t p = 0; p < rule.nodes.size(); ++p) {
        for (int m = 0; m < K; ++m) {
            for (int i = 0; i < K; ++i) {
                stiffness(m, i) +=
                    rule.weights[p] * legendre::value(m, rule.nodes[p]) * legendre::derivative(i, rule.nodes[p]);
            }
        }
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(2 * N * 5 * K));
    const auto H = [K](int cell, int mode) { return cell * K + mode; };
    const auto E = [K, N](int cell, int mode) { return N + cell * K + mode; };

    // One block row per equation. `self` is the field under the derivative, `other` the field
    // whose jump enters the upwind trace with weight `jumpScale`.
    const auto assemble = [&](int rowOffset, auto self, auto other, double jumpScale) {
        for (int j = 0; j < M; ++j) {
            const int r = (j + 1) % M;
            const int l = (j + M - 1) % M;
            for (int i = 0; i < K; ++i) {
                const int row = rowOffset + j * K + i;
                for (int m = 0; m < K; ++m) {
                    triplets.emplace_back(row, self(j, m), -scale * stiffness(m, i));
                }
                // Right face j+1/2: minus side is cell j at xi=+1, plus side is cell r at xi=-1.
                const double wr = scale * legendre::right(i);
                for (int m = 0; m < K; ++m) {
                    triplets.emplace_back(row, self(j, m), wr * 0.5 * legendre::right(m));
                    triplets.emplace_back(row, self(r, m), wr * 0.5 * legendre::left(m));
                    triplets.emplace_back(row, other(r, m), wr * 0.5 * jumpScale * legendre::left(m));
                    triplets.emplace_back(row, other(j, m), -wr * 0.5 * jumpScale * legendre::right(m));
                }
                // Left face j-1/2: minus side is cell l at xi=+1, plus side is cell j at xi=-1.
                const double wl = -scale * legendre::left(i);
                for (int m = 0; m < K; ++m) {
                    triplets.emplace_back(row, self(l, m), wl * 0.5 * legendre::right(m));
                    triplets.emplace_back(row, self(j, m), wl * 0.5 * legendre::left(m));
                    triplets.emplace_back(row, other(j, m), wl * 0.5 * jumpScale * legendre::left(m));
                    triplets.emplace_back(row, other(l, m), -wl * 0.5 * jumpScale * legendre::right(m));
                }
            }
        }
    };
    const double Z = params.impedance();
    assemble(0, E, H, Z);
    assemble(N, H, E, 1.0 / Z);

    matrix_.resize(2 * N, 2 * N);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.prune(0.0);
}

DgField DgOperators::derivativeE(const DgField& H, const DgField& E) const
{
    const int N = fieldSize();
    Eigen::VectorXd stacked(2 * N);
    stacked << H.coeffs(), E.coeffs();
    return DgField(mesh_, degree_, matrix_.topRows(N) * stacked);
}

DgField DgOperators::derivativeH(const DgField& H, const DgField& E) const
{
    const int N = fieldSize();
    Eigen::VectorXd stacked(2 * N);
    stacked << H.coeffs(), E.coeffs();
    return DgField(mesh_, degree_, matrix_.bottomRows(N) * stacked);
}

} // namespace colecole
