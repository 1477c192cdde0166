#pragma once

// Shared fixtures: the reference parameter set used throughout the membrane
// experiments and a rejection sampler for random stable models.

#include <cmath>
#include <random>

#include "inloop/constants.hpp"
#include "inloop/params.hpp"
#include "inloop/stability.hpp"

namespace support {

inline constexpr double omega_m_ref = 2.0 * inloop::constants::pi * 343.13e3;  // rad/s
inline constexpr double kappa_frac_ref = 0.06;     // kappa / omega_m
inline constexpr double gamma_frac_ref = 3.4e-6;   // gamma / omega_m
inline constexpr double mass_ref = 1e-12;          // kg

/// Reference system with the coupling given as a cooperativity and the
/// feedback as zeta/kappa.
inline inloop::SystemParams reference_params(double kappa2_over_kappa, double cooperativity,
                                             double zeta_over_kappa, double phi = 0.0,
                                             double eta = 1.0, double temperature = 0.0,
                                             double kappa_over_omega_m = kappa_frac_ref) {
    inloop::SystemParams p;
    p.omega_m = omega_m_ref;
    p.gamma = gamma_frac_ref * omega_m_ref;
    const double kappa = kappa_over_omega_m * omega_m_ref;
    p.kappa2 = kappa2_over_kappa * kappa;
    p.kappa1 = kappa - p.kappa2;
    p.coupling_lambda = inloop::coupling_from_cooperativity(cooperativity, kappa, p.gamma);
    p.phase_phi = phi;
    p.eta = eta;
    p.mass = mass_ref;
    p.temperature = temperature;
    const double zeta = zeta_over_kappa * kappa;
    p.feedback_gain_g =
        zeta == 0.0 ? 0.0 : zeta / std::sqrt(2.0 * eta * p.kappa1 * p.kappa2);
    return p;
}

/// Draws raw parameters over wide ranges; may be unstable or overdriven.
inline inloop::SystemParams random_params(std::mt19937_64& rng, double zeta_frac_max = 1.2) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    inloop::SystemParams p;
    p.omega_m = omega_m_ref;
    const double kappa = omega_m_ref * std::pow(10.0, -2.0 + 2.5 * uni(rng));
    const double k2_frac = 0.05 + 0.9 * uni(rng);
    p.kappa2 = k2_frac * kappa;
    p.kappa1 = kappa - p.kappa2;
    p.gamma = kappa * std::pow(10.0, -6.0 + 5.0 * uni(rng));
    const double coop = 0.01 + 3.0 * uni(rng);
    p.coupling_lambda = std::sqrt(coop * kappa * p.gamma);
    p.phase_phi = -inloop::constants::pi + 2.0 * inloop::constants::pi * uni(rng);
    p.eta = 0.1 + 0.9 * uni(rng);
    p.mass = mass_ref;
    p.temperature = 0.0;
    const double zeta = zeta_frac_max * kappa * uni(rng);
    p.feedback_gain_g = zeta / std::sqrt(2.0 * p.eta * p.kappa1 * p.kappa2);
    return p;
}

/// Rejection sampling until both stability routes agree on "stable" with a
/// comfortable margin and the feedback stays below overdrive.
inline inloop::Model random_stable_model(std::mt19937_64& rng) {
    for (;;) {
        const inloop::SystemParams p = random_params(rng, 0.9);
        const double zeta =
            p.feedback_gain_g * std::sqrt(2.0 * p.eta * p.kappa1 * p.kappa2);
        if (zeta >= 0.999 * p.kappa()) continue;
        const auto rh = inloop::rh::conditions(p.gamma, p.kappa(),
                                               p.coupling_lambda * p.coupling_lambda /
                                                   (p.kappa() * p.gamma),
                                               zeta, p.phase_phi);
        if (!(rh.margin > 1e-6)) continue;
        const inloop::Model m = inloop::make_model(p);
        if (!inloop::eigen_stability(m).stable_eig) continue;
        return m;
    }
}

}  // namespace support
