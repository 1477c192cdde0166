#pragma once

#include <complex>

#include "inloop/errors.hpp"

namespace inloop {

// =============================================================================
// Physical inputs
// =============================================================================
//
// All rates are amplitude decay rates, matching the Langevin equations
// db/dt = -gamma b + ..., dc/dt = -kappa c + ....  The feedback loop is
// described by the dimensionless gain g and the global phase phi (local
// oscillator phase plus loop delay, collapsed into one angle).

struct SystemParams {
    double omega_m = 0.0;          ///< mechanical angular frequency [rad/s]
    double gamma = 0.0;            ///< mechanical amplitude decay rate [rad/s]
    double kappa1 = 0.0;           ///< input mirror amplitude decay rate [rad/s]
    double kappa2 = 0.0;           ///< detection mirror amplitude decay rate [rad/s]
    double coupling_lambda = 0.0;  ///< linearized optomechanical rate [rad/s]
    double feedback_gain_g = 0.0;  ///< dimensionless feedback gain
    double phase_phi = 0.0;        ///< global feedback phase [rad]
    double eta = 1.0;              ///< detection efficiency, in [0, 1]
    double mass = 0.0;             ///< effective mass [kg]
    double temperature = 0.0;      ///< mechanical bath temperature [K]

    [[nodiscard]] double kappa() const { return kappa1 + kappa2; }

    /// Informational only: total cavity linewidth below the mechanical
    /// frequency, where the rotating wave approximation is good.
    [[nodiscard]] bool resolved_sideband() const { return kappa() < omega_m; }

    /// Throws NonPositiveRate / InvalidParameter on unphysical inputs.
    void validate() const;
};

// =============================================================================
// Derived quantities
// =============================================================================

struct DerivedParams {
    double kappa = 0.0;     ///< total cavity decay kappa1 + kappa2 [rad/s]
    double zeta = 0.0;      ///< feedback linewidth reduction g sqrt(2 eta k1 k2) [rad/s]
    double kappa_fb = 0.0;  ///< feedback-modified decay kappa - zeta [rad/s]
    double n_fb = 0.0;      ///< feedback-mediated thermal-like occupancy
    std::complex<double> m_fb;  ///< anomalous correlation coefficient
    std::complex<double> p_fb;  ///< cross correlation with the detected input
    double cooperativity = 0.0;  ///< C = lambda^2 / (kappa gamma)
    double nbar = 0.0;      ///< thermal occupation of the mechanical bath
    double x_zpf = 0.0;     ///< zero-point position uncertainty [m]
};

/// Populates every derived quantity from validated physical inputs.
/// Pure: identical inputs give bit-identical outputs.
/// Throws FeedbackOverdrive when zeta >= kappa.
[[nodiscard]] DerivedParams derive_params(const SystemParams& p);

/// Mean thermal occupation [exp(hbar omega_m / kB T) - 1]^-1.
/// The T = 0 limit returns 0 without evaluating the exponential.
[[nodiscard]] double thermal_occupation(double omega_m, double temperature);

/// Inverse of C = lambda^2/(kappa gamma): lambda = sqrt(C kappa gamma).
[[nodiscard]] double coupling_from_cooperativity(double cooperativity, double kappa,
                                                 double gamma);

/// Validated parameter bundle passed to the response/stability/metric
/// operations.  Immutable value type; safe to copy across workers.
struct Model {
    SystemParams sys;
    DerivedParams der;
};

[[nodiscard]] Model make_model(const SystemParams& p);

}  // namespace inloop
