#ifndef COLECOLE_STATE_HPP
#define COLECOLE_STATE_HPP

#include "colecole/dg.hpp"

#include <vector>

namespace colecole {

/// Full dynamical state: fields H, E, polarization P and the auxiliary modes psi_l.
struct SimState {
    double t = 0.0;
    DgField H;
    DgField E;
    DgField P;
    std::vector<DgField> psi;

    /// State at t = 0 with P = 0 and every psi_l = 0.
    static SimState initial(DgField H0, DgField E0, std::size_t modes);
    /// All-zero state on the given space.
    static SimState zero(const Mesh1D& mesh, int degree, std::size_t modes);
};

} // namespace colecole

#endif // COLECOLE_STATE_HPP
