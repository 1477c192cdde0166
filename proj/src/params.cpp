#include "inloop/params.hpp"

#include <cmath>
#include <complex>

#include "inloop/constants.hpp"

namespace inloop {

void SystemParams::validate() const {
    if (!(omega_m > 0.0)) throw NonPositiveRate("omega_m must be > 0");
    if (!(gamma > 0.0)) throw NonPositiveRate("gamma must be > 0");
    if (!(kappa1 > 0.0)) throw NonPositiveRate("kappa1 must be > 0");
    if (!(kappa2 > 0.0)) throw NonPositiveRate("kappa2 must be > 0");
    if (!(mass > 0.0)) throw NonPositiveRate("mass must be > 0");
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must be in [0, 1]");
    if (!(temperature >= 0.0)) throw InvalidParameter("temperature must be >= 0");
    if (!std::isfinite(coupling_lambda) || !std::isfinite(feedback_gain_g) ||
        !std::isfinite(phase_phi)) {
        throw InvalidParameter("coupling, gain and phase must be finite");
    }
}

double thermal_occupation(double omega_m, double temperature) {
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega_m / (constants::k_boltzmann * temperature);
    // expm1 keeps precision for x << 1 and saturates to +inf (-> 0) for large x.
    return 1.0 / std::expm1(x);
}

double coupling_from_cooperativity(double cooperativity, double kappa, double gamma) {
    if (cooperativity < 0.0) throw NegativeCooperativity("cooperativity must be >= 0");
    return std::sqrt(cooperativity * kappa * gamma);
}

DerivedParams derive_params(const SystemParams& p) {
    p.validate();

    DerivedParams d;
    d.kappa = p.kappa1 + p.kappa2;
    d.zeta = p.feedback_gain_g * std::sqrt(2.0 * p.eta * p.kappa1 * p.kappa2);
    d.kappa_fb = d.kappa - d.zeta;
    if (!(d.kappa_fb > 0.0)) {
        throw FeedbackOverdrive("zeta >= kappa: feedback-modified decay rate <= 0");
    }

    const std::complex<double> phase = std::polar(1.0, p.phase_phi);
    if (d.zeta != 0.0) {
        // eta > 0 is implied here: zeta vanishes identically at eta = 0.
        d.n_fb = d.zeta * d.zeta / (4.0 * p.eta * p.kappa2 * d.kappa_fb);
        d.m_fb = d.zeta / (2.0 * d.kappa_fb) * phase;
        d.p_fb = -d.zeta / std::sqrt(4.0 * p.kappa2 * d.kappa_fb) * phase;
    }

    d.cooperativity = p.coupling_lambda * p.coupling_lambda / (d.kappa * p.gamma);
    d.nbar = thermal_occupation(p.omega_m, p.temperature);
    d.x_zpf = std::sqrt(constants::hbar / (2.0 * p.mass * p.omega_m));
    return d;
}

Model make_model(const SystemParams& p) { return Model{p, derive_params(p)}; }

}  // namespace inloop
