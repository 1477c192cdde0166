#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "inloop/params.hpp"

namespace inloop {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;

// =============================================================================
// Frequency-domain response of the feedback-modified linear system
// =============================================================================
//
// Basis order throughout is (c, c+, b, b+): cavity annihilation/creation
// followed by mechanical annihilation/creation.  Frequencies are in the
// rotating (interaction) picture: omega = 0 is detection at the cavity
// resonance, forces quasi-resonant with the mechanics.
//
// Star convention: for any transfer function f, f*(omega) = conj(f(-omega)),
// matching the operator convention o+[w] = (o[-w])+.  This is the unique
// convention under which the response assembled from Phi reproduces the
// closed-form expression; it is asserted by test.

enum class BasisOrder { c_cdag_b_bdag };

struct DriftMatrix {
    Matrix4c entries;
    static constexpr BasisOrder basis_order = BasisOrder::c_cdag_b_bdag;
};

struct ScatteringMatrix {
    double omega = 0.0;
    Matrix4c s;
};

struct TransferPair {
    double omega = 0.0;
    Complex psi;       ///< in-loop quadrature transfer of the cavity input
    Complex phi;       ///< in-loop quadrature transfer of the mechanical input
    Complex psi_star;  ///< conj(psi(-omega))
    Complex phi_star;  ///< conj(phi(-omega))
};

struct NoiseBudget {
    double omega = 0.0;
    double r_m = 0.0;    ///< mechanical response (power transduction gain)
    double n_add = 0.0;  ///< optically added measurement noise [quanta]
    double s_nn = 0.0;   ///< noise-force spectral density [N^2/Hz]
};

/// Constant coefficients of the feedback-modified input correlations in the
/// frequency domain (delta-function weights).
struct Correlations {
    double n_fb = 0.0;
    Complex m_fb;
    Complex p_fb;
    double kappa_ratio = 1.0;  ///< kappa / kappa_fb
};

[[nodiscard]] DriftMatrix drift_matrix(const Model& m);

/// s[w] = -G (A + i w I)^-1 H by columnwise LU solve with one refinement
/// step.  Throws SingularAtFrequency when the condition estimate exceeds 1e14.
[[nodiscard]] ScatteringMatrix scattering_numeric(const Model& m, double omega);

/// All 16 matrix elements from the cavity/mechanical susceptibilities.
/// Agrees with scattering_numeric entrywise to relative 1e-10.
[[nodiscard]] ScatteringMatrix scattering_closed_form(const Model& m, double omega);

[[nodiscard]] TransferPair transfer_functions(const Model& m, double omega);

/// R_m[w] = (Phi[-w] Phi*[w] + Phi[w] Phi*[-w]) / 2, via the scattering route.
[[nodiscard]] double mechanical_response(const Model& m, double omega);

/// Added measurement noise assembled from Psi and the input correlations.
/// Throws ZeroResponse when R_m underflows (below 1e-300).
[[nodiscard]] double added_noise_general(const Model& m, double omega);

/// Closed-form rotating-wave expressions.  Rational in omega; a vanishing
/// denominator maps to +infinity instead of throwing.
[[nodiscard]] double mechanical_response_rwa(const Model& m, double omega);
[[nodiscard]] double added_noise_rwa(const Model& m, double omega);

/// S_NN[w] = 2 hbar m gamma omega_m R_m[w] [(nbar + 1/2) + n_add[w]].
[[nodiscard]] NoiseBudget noise_force_spectrum(const Model& m, double omega, double nbar);

/// Fbar[w] = (Phi*[w] F[w - w_m] - Phi[w] F[w + w_m]) / 2 for an arbitrary
/// force spectrum F.  This half-difference definition is primary; see the
/// tests for the relation |Fbar| = sqrt(R_m) |cos phi| F at constant F.
[[nodiscard]] Complex force_estimator(const Model& m, double omega,
                                      const std::function<Complex(double)>& force_spectrum);

[[nodiscard]] Correlations correlation_coefficients(const Model& m);

// -----------------------------------------------------------------------------
// Closed-form kernels on raw parameters.
//
// These take (gamma, kappa, kappa2, C, zeta, phi) directly so that region
// scans can evaluate cells where no valid Model exists (zeta >= kappa is
// classified unstable, not an error, on a map).
// -----------------------------------------------------------------------------
namespace rwa {

[[nodiscard]] double mechanical_response(double omega, double gamma, double kappa,
                                         double kappa2, double cooperativity, double zeta,
                                         double phi);

[[nodiscard]] double added_noise(double omega, double gamma, double kappa, double kappa2,
                                 double cooperativity, double zeta, double phi, double eta);

}  // namespace rwa

namespace detail {

/// Shared noise assembly: n_add from Psi[w], Psi[-w] and R_m.  Used by both
/// the rotating-wave route and the Floquet sideband route.
[[nodiscard]] double added_noise_from_psi(const Model& m, Complex psi_w, Complex psi_mw,
                                          double r_m);

}  // namespace detail

}  // namespace inloop
