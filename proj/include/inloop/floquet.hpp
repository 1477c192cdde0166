#pragma once

#include <Eigen/Dense>

#include "inloop/response.hpp"

namespace inloop {

using Matrix12c = Eigen::Matrix<Complex, 12, 12>;

// =============================================================================
// Sideband truncation beyond the rotating wave approximation
// =============================================================================
//
// The counter-rotating interaction oscillates at +-2 omega_m.  Truncating the
// Fourier ladder at |n| <= 1 couples three copies of the 4x4 system into a
// 12x12 block-tridiagonal one.  Noise enters only the n = 0 block, and the
// detected spectrum is evaluated from the n = 0 output component (the
// homodyne window is quasi-resonant; the n = +-1 components oscillate at
// -+2 omega_m in the lab frame and fall outside it).

struct FloquetBlocks {
    Matrix4c a0;        ///< drift matrix, n = 0 component
    Matrix4c a_plus;    ///< n = +1 component (two i*lambda entries)
    Matrix4c a_minus;   ///< n = -1 component (two -i*lambda entries)
    Matrix12c abar;     ///< block tridiagonal ladder with +-2i omega_m shifts
    Matrix12c hbar_mat; ///< input weights, zero outside the central block
    Matrix12c gbar_mat; ///< output weights, zero outside the central block
};

struct FloquetSolution {
    double omega = 0.0;
    Matrix12c ubar_transfer;    ///< -(i w I + Abar)^-1 Hbar
    Matrix4c central_scattering;  ///< G times the central 4x4 transfer block
};

struct FloquetResponse {
    double r_m_brwa = 0.0;
    double n_add_brwa = 0.0;
};

[[nodiscard]] FloquetBlocks build_floquet(const Model& m);

[[nodiscard]] FloquetSolution floquet_solution(const Model& m, double omega);

/// Beyond-RWA response and added noise by the same Psi/Phi combinations as
/// the rotating-wave module, from the central scattering block.  Reduces to
/// the RWA values as kappa/omega_m -> 0.  A vanishing response maps
/// n_add_brwa to +infinity.
[[nodiscard]] FloquetResponse floquet_response(const Model& m, double omega);

}  // namespace inloop
