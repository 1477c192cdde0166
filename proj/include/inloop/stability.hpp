#pragma once

#include "inloop/params.hpp"

namespace inloop {

// =============================================================================
// Stability classification
// =============================================================================
//
// Two independent routes: the four Routh-Hurwitz conditions evaluated as
// literal polynomials in (gamma, kappa, C, zeta, phi), and the sign of the
// largest real part of the drift-matrix spectrum.  They must agree away from
// the boundary; tests enforce this on random draws.

struct StabilityReport {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    bool stable_rh = false;
    double max_real_eigenvalue = 0.0;  ///< [rad/s]
    bool stable_eig = false;
    double margin = 0.0;  ///< min of the c_i, each normalized by its degree in rate
};

/// Fills c1..c4, stable_rh and margin; eigenvalue fields are left zero.
/// Boundary points (any normalized c_i within 1e-12 of zero) classify
/// unstable.
[[nodiscard]] StabilityReport routh_hurwitz(const Model& m);

/// Fills max_real_eigenvalue and stable_eig from the 4x4 complex spectrum,
/// with absolute tolerance 1e-9 * kappa on the sign decision.
/// Throws EigenFailure if the eigensolver does not converge.
[[nodiscard]] StabilityReport eigen_stability(const Model& m);

/// Both routes in one report.
[[nodiscard]] StabilityReport stability_report(const Model& m);

enum class VaryParameter { zeta, cooperativity };

/// Bisection (relative 1e-6) on the Routh-Hurwitz flag along one parameter,
/// holding everything else at the model's values.  Throws NoSignChange when
/// lo and hi classify identically.
[[nodiscard]] double stability_boundary(const Model& m, VaryParameter vary, double lo,
                                        double hi);

// Raw-parameter kernels, usable on grid cells where zeta >= kappa.
namespace rh {

struct Conditions {
    double c1, c2, c3, c4;
    double margin;
    [[nodiscard]] bool stable() const;
};

[[nodiscard]] Conditions conditions(double gamma, double kappa, double cooperativity,
                                    double zeta, double phi);

}  // namespace rh

}  // namespace inloop
