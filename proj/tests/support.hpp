#ifndef COLECOLE_TEST_SUPPORT_HPP
#define COLECOLE_TEST_SUPPORT_HPP

#include "colecole/dg.hpp"
#include "colecole/quadopt.hpp"
#include "colecole/state.hpp"

#include <gtest/gtest.h>

#include <random>

namespace colecole::test {

/// Every randomized test draws from this seed so failures replay exactly.
inline constexpr unsigned kSeed = 20240611u;

inline std::mt19937_64 rng(unsigned salt = 0)
{
    ::testing::Test::RecordProperty("seed", static_cast<int>(kSeed + salt));
    return std::mt19937_64(kSeed + salt);
}

inline DgField random_field(const Mesh1D& mesh, int degree, std::mt19937_64& gen, double scale = 1.0)
{
    std::normal_distribution<double> n(0.0, scale);
    DgField f(mesh, degree);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        f.coeffs()(i) = n(gen);
    }
    return f;
}

inline DiffusiveQuadrature random_quadrature(int L, double alpha, std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> logz(-3.0, 1.0);
    std::uniform_real_distribution<double> logl(-2.0, 3.0);
    std::vector<double> z(L);
    std::vector<double> l(L);
    for (int i = 0; i < L; ++i) {
        z[i] = std::pow(10.0, logz(gen));
        l[i] = std::pow(10.0, logl(gen));
    }
    return DiffusiveQuadrature(z, l, alpha);
}

} // namespace colecole::test

#endif
