#pragma once

#include <optional>

#include "inloop/params.hpp"

namespace inloop {

// Figures of merit for the sensor as a whole.  SNR and sensitivity share the
// identity snr * sensitivity = |cos phi| * F; the amplification bandwidth is
// the full width at half maximum of the mechanical response.

struct SensorPoint {
    double omega = 0.0;
    double snr_per_force = 0.0;       ///< SNR for a unit (1 N) constant force
    double sensitivity = 0.0;         ///< minimum detectable force [N/sqrt(Hz)]
    std::optional<double> fwhm;       ///< resonance-level quantity [rad/s]
};

/// |cos phi| F / sqrt(2 hbar m gamma omega_m) / sqrt(nbar + 1/2 + n_add[w]).
/// Normative impulsive-force form; the signal/noise ratio route agrees with
/// it to 1e-8 wherever the response is nonzero (asserted by test).
[[nodiscard]] double snr(const Model& m, double omega, double nbar, double force_amp);

/// sqrt(2 hbar m gamma omega_m) sqrt(nbar + 1/2 + n_add[w]): the input force
/// with SNR = 1.
[[nodiscard]] double sensitivity(const Model& m, double omega, double nbar);

/// Width of the band where R_m exceeds half its resonant value, found by
/// outward bracketing plus bisection (relative 1e-6) on each side of zero.
/// Search window |omega| <= 10 kappa: past that there is no amplification
/// band of interest.  Throws NoHalfCrossing when the response never falls
/// below half maximum in the window (e.g. when it vanishes identically).
[[nodiscard]] double fwhm(const Model& m);

/// Bundled figures of merit at one frequency.  fwhm is attached on the
/// resonance point only (and left empty when there is no amplification band).
[[nodiscard]] SensorPoint sensor_point(const Model& m, double omega, double nbar);

}  // namespace inloop
