#include "inloop/stability.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "inloop/response.hpp"

namespace inloop {

namespace rh {

bool Conditions::stable() const {
    // Conservative: a condition sitting on zero within the normalized
    // 1e-12 band counts as violated.
    return margin > 1e-12;
}

Conditions conditions(double gamma, double kappa, double cooperativity, double zeta,
                      double phi) {
    const double g = gamma;
    const double k = kappa;
    const double c = cooperativity;
    const double zc = zeta * std::cos(phi);

    Conditions r{};
    r.c1 = g - zc + k;
    r.c2 = zc * (-4.0 * g * g - (c + 8.0) * g * k + 2.0 * zc * (2.0 * g + k) - 3.0 * k * k) +
           (g + k) * (g * g + (c + 3.0) * g * k + k * k);
    r.c3 = (zc * (zc * (c * k + 2.0 * k + 2.0 * g) - (g + k) * (2.0 * c * k + 3.0 * k + g)) +
            k * (c + 1.0) * (g + k) * (g + k)) *
           (g - 2.0 * zc + k);
    r.c4 = c * k - 2.0 * zc + k;

    // Normalize by powers of the total rate so the four conditions are
    // comparable: deg(c1) = deg(c4) = 1, deg(c2) = 3, deg(c3) = 4.
    const double s = g + k;
    const double s2 = s * s;
    r.margin = std::min(std::min(r.c1 / s, r.c4 / s),
                        std::min(r.c2 / (s * s2), r.c3 / (s2 * s2)));
    return r;
}

}  // namespace rh

StabilityReport routh_hurwitz(const Model& m) {
    const rh::Conditions c = rh::conditions(m.sys.gamma, m.der.kappa, m.der.cooperativity,
                                            m.der.zeta, m.sys.phase_phi);
    StabilityReport r;
    r.c1 = c.c1;
    r.c2 = c.c2;
    r.c3 = c.c3;
    r.c4 = c.c4;
    r.margin = c.margin;
    r.stable_rh = c.stable();
    return r;
}

StabilityReport eigen_stability(const Model& m) {
    Eigen::ComplexEigenSolver<Matrix4c> solver(drift_matrix(m).entries, false);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("drift matrix eigensolver did not converge");
    }
    StabilityReport r;
    r.max_real_eigenvalue = solver.eigenvalues().real().maxCoeff();
    // Real parts inside the +-1e-9 kappa band count as zero, which classifies
    // as unstable, matching the conservative boundary convention.
    double decisive = r.max_real_eigenvalue;
    if (std::abs(decisive) < 1e-9 * m.der.kappa) decisive = 0.0;
    r.stable_eig = decisive < 0.0;
    return r;
}

StabilityReport stability_report(const Model& m) {
    StabilityReport r = routh_hurwitz(m);
    const StabilityReport e = eigen_stability(m);
    r.max_real_eigenvalue = e.max_real_eigenvalue;
    r.stable_eig = e.stable_eig;
    return r;
}

double stability_boundary(const Model& m, VaryParameter vary, double lo, double hi) {
    const auto stable_at = [&](double value) {
        const double zeta = (vary == VaryParameter::zeta) ? value : m.der.zeta;
        const double coop =
            (vary == VaryParameter::cooperativity) ? value : m.der.cooperativity;
        return rh::conditions(m.sys.gamma, m.der.kappa, coop, zeta, m.sys.phase_phi)
            .stable();
    };

    const bool at_lo = stable_at(lo);
    if (at_lo == stable_at(hi)) {
        throw NoSignChange("no stability change between interval endpoints");
    }
    while (hi - lo > 1e-6 * std::max(std::abs(lo), std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (stable_at(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace inloop
