#include "inloop/metrics.hpp"

#include <cmath>

#include "inloop/constants.hpp"
#include "inloop/response.hpp"

namespace inloop {

namespace {

double force_unit(const Model& m) {
    return std::sqrt(2.0 * constants::hbar * m.sys.mass * m.sys.gamma * m.sys.omega_m);
}

}  // namespace

double sensitivity(const Model& m, double omega, double nbar) {
    return force_unit(m) * std::sqrt(nbar + 0.5 + added_noise_rwa(m, omega));
}

double snr(const Model& m, double omega, double nbar, double force_amp) {
    return std::abs(std::cos(m.sys.phase_phi)) * force_amp / sensitivity(m, omega, nbar);
}

double fwhm(const Model& m) {
    const double r0 = mechanical_response_rwa(m, 0.0);
    if (!(r0 > 0.0) || !std::isfinite(r0)) {
        throw NoHalfCrossing("mechanical response vanishes at resonance");
    }
    const double half = 0.5 * r0;
    const double window = 10.0 * m.der.kappa;
    const double step = m.der.kappa / 200.0;

    // One-sided search; the search runs independently on each side even
    // though R_m is even in omega under the star convention.
    const auto crossing = [&](double direction) {
        double prev = 0.0;
        for (double w = step; w <= window + 0.5 * step; w += step) {
            if (mechanical_response_rwa(m, direction * w) < half) {
                double lo = prev;
                double hi = w;
                while (hi - lo > 1e-6 * hi) {
                    const double mid = 0.5 * (lo + hi);
                    if (mechanical_response_rwa(m, direction * mid) < half) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return direction * 0.5 * (lo + hi);
            }
            prev = w;
        }
        throw NoHalfCrossing("response stays above half maximum within 10 kappa");
    };

    const double upper = crossing(+1.0);
    const double lower = crossing(-1.0);
    return upper - lower;
}

SensorPoint sensor_point(const Model& m, double omega, double nbar) {
    SensorPoint p;
    p.omega = omega;
    p.sensitivity = sensitivity(m, omega, nbar);
    p.snr_per_force = snr(m, omega, nbar, 1.0);
    if (omega == 0.0) {
        try {
            p.fwhm = fwhm(m);
        } catch (const NoHalfCrossing&) {
        }
    }
    return p;
}

}  // namespace inloop
