/**
 * @file oracle.hpp
 * @brief Direct solver that discretizes the Caputo derivative with the L1 formula and keeps
 *        the whole polarization history. Reference for cross-validation and timing.
 */

#ifndef COLECOLE_ORACLE_HPP
#define COLECOLE_ORACLE_HPP

#include "colecole/dg.hpp"
#include "colecole/stepper.hpp"

#include <vector>

namespace colecole {

/// a_m = tau^(-alpha) / Gamma(2 - alpha) ((m+1)^(1-alpha) - m^(1-alpha)), m = 0..n-1.
std::vector<double> l1_coefficients(int n, double alpha, double tau);

/**
 * @brief Coefficients of P at levels 0..n-1, appended level by level, with the weight table.
 *
 * Level m occupies column m of a (fieldSize x levels) column-major block. Contributions of
 * old levels to the next kBlock steps are formed together as one matrix product, so the
 * stored history is swept once per block instead of once per step.
 */
class L1History {
public:
    /// Reserves room for `capacity` levels.
    L1History(double alpha, double tau, int fieldSize, int capacity);

    void push(const DgField& P);
    int levels() const { return levels_; }
    int fieldSize() const { return fieldSize_; }
    double alpha() const { return alpha_; }
    double tau() const { return tau_; }
    /// a_m, extended on demand.
    double a(int m);

    /// sum_{m=1}^{n-1} (a_{n-m} - a_{n-m-1}) P^m - a_{n-1} P^0, with n = levels().
    Eigen::VectorXd historyTerm();

    static constexpr int kBlock = 64;

private:
    void extend(int count);
    double weight(int n, int m) const;
    void rebuildFar(int start);

    double alpha_;
    double tau_;
    int fieldSize_;
    int levels_ = 0;
    std::vector<double> store_;
    std::vector<double> a_;
    Eigen::VectorXd reversedDrop_;
    int farStart_ = -1;
    Eigen::MatrixXd far_;
};

/// a_0 P^n + history term: the L1 Caputo derivative at level n = history.levels().
DgField l1_caputo_apply(L1History& history, const DgField& Pn);

/**
 * @brief Same DG space and BDF2 treatment of H and E as run_simulation; the polarization
 *        law uses l1_caputo_apply with a_0 P^n implicit. Energy sampling is not supported.
 */
SimulationResult run_direct_simulation(const SimulationConfig& config);

} // namespace colecole

#endif // COLECOLE_ORACLE_HPP
