#include "inloop/response.hpp"

#include <cmath>
#include <limits>

#include "inloop/constants.hpp"

namespace inloop {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kConditionLimit = 1e14;
constexpr double kResponseGuard = 1e-300;

Eigen::Vector4cd output_weights(const Model& m) {
    const double sk2 = std::sqrt(2.0 * m.sys.kappa2);
    const double sg = std::sqrt(2.0 * m.sys.gamma);
    return {sk2, sk2, sg, sg};
}

Eigen::Vector4cd input_weights(const Model& m) {
    const double skfb = std::sqrt(2.0 * m.der.kappa_fb);
    const double sg = std::sqrt(2.0 * m.sys.gamma);
    return {skfb, skfb, sg, sg};
}

}  // namespace

DriftMatrix drift_matrix(const Model& m) {
    const double zeta = m.der.zeta;
    const double kappa = m.der.kappa;
    const double gamma = m.sys.gamma;
    const Complex il = kI * m.sys.coupling_lambda;
    const Complex ze_m = zeta * std::polar(1.0, -m.sys.phase_phi);
    const Complex ze_p = zeta * std::polar(1.0, m.sys.phase_phi);

    DriftMatrix d;
    d.entries.setZero();
    d.entries(0, 0) = ze_m - kappa;
    d.entries(0, 1) = ze_p;
    d.entries(0, 2) = il;
    d.entries(1, 0) = ze_m;
    d.entries(1, 1) = ze_p - kappa;
    d.entries(1, 3) = -il;
    d.entries(2, 0) = il;
    d.entries(2, 2) = -gamma;
    d.entries(3, 1) = -il;
    d.entries(3, 3) = -gamma;
    return d;
}

ScatteringMatrix scattering_numeric(const Model& m, double omega) {
    const Matrix4c coeff = drift_matrix(m).entries + kI * omega * Matrix4c::Identity();
    const Eigen::PartialPivLU<Matrix4c> lu(coeff);
    if (!(lu.rcond() > 1.0 / kConditionLimit)) {
        throw SingularAtFrequency("scattering pole at omega = " + std::to_string(omega));
    }

    const Matrix4c rhs = (-input_weights(m)).asDiagonal();
    Matrix4c x = lu.solve(rhs);
    x += lu.solve(rhs - coeff * x);  // one refinement step

    ScatteringMatrix out;
    out.omega = omega;
    out.s = output_weights(m).asDiagonal() * x;
    return out;
}

ScatteringMatrix scattering_closed_form(const Model& m, double omega) {
    const double zeta = m.der.zeta;
    const double kappa = m.der.kappa;
    const double kfb = m.der.kappa_fb;
    const double gamma = m.sys.gamma;
    const double k2 = m.sys.kappa2;
    const double lam = m.sys.coupling_lambda;
    const Complex e_m = std::polar(1.0, -m.sys.phase_phi);
    const Complex e_p = std::polar(1.0, m.sys.phase_phi);

    // chi_c*(w) and chi_m*(w) are conjugates at negated frequency.
    const Complex xc = 1.0 / (-kappa + kI * omega + zeta * e_m);
    const Complex xm = 1.0 / (-gamma + kI * omega);
    const Complex xcs = std::conj(1.0 / (-kappa - kI * omega + zeta * e_m));
    const Complex xms = std::conj(1.0 / (-gamma - kI * omega));

    const Complex l2 = lam * lam;
    const Complex quad = l2 * xc * xcs * xm * xms;
    const Complex xi_inv = l2 * (quad + xc * xm + xcs * xms) + 1.0 - zeta * zeta * xc * xcs;
    const double scale = 1.0 + std::abs(l2 * quad) + std::abs(l2 * xc * xm) +
                         std::abs(l2 * xcs * xms) + std::abs(zeta * zeta * xc * xcs);
    if (std::abs(xi_inv) < 1e-14 * scale) {
        throw SingularAtFrequency("closed-form pole at omega = " + std::to_string(omega));
    }
    const Complex xi = 1.0 / xi_inv;

    const double skk = std::sqrt(k2 * kfb);
    const double sgk2 = std::sqrt(gamma * k2);
    const double sgkfb = std::sqrt(gamma * kfb);

    ScatteringMatrix out;
    out.omega = omega;
    Matrix4c& s = out.s;
    s(0, 0) = -2.0 * skk * xc * xi * (l2 * xcs * xms + 1.0);
    s(0, 1) = 2.0 * skk * zeta * e_p * xc * xcs * xi;
    s(0, 2) = 2.0 * kI * sgk2 * xc * xm * lam * xi * (l2 * xcs * xms + 1.0);
    s(0, 3) = 2.0 * kI * sgk2 * zeta * e_p * lam * xc * xcs * xms * xi;
    s(1, 0) = 2.0 * skk * zeta * e_m * xc * xcs * xi;
    s(1, 1) = -2.0 * skk * xcs * xi * (l2 * xc * xm + 1.0);
    s(1, 2) = -2.0 * kI * sgk2 * zeta * e_m * lam * xc * xcs * xm * xi;
    s(1, 3) = -2.0 * kI * sgk2 * xcs * xms * lam * xi * (l2 * xc * xm + 1.0);
    s(2, 0) = 2.0 * kI * sgkfb * xc * xm * lam * xi * (l2 * xcs * xms + 1.0);
    s(2, 1) = -2.0 * kI * sgkfb * zeta * e_p * lam * xc * xcs * xm * xi;
    s(2, 2) = 2.0 * gamma * xm * xi * (xcs * (zeta * zeta * xc - l2 * xms) - 1.0);
    s(2, 3) = 2.0 * gamma * zeta * e_p * l2 * xc * xcs * xm * xms * xi;
    s(3, 0) = 2.0 * kI * sgkfb * zeta * e_m * lam * xc * xcs * xms * xi;
    s(3, 1) = -2.0 * kI * sgkfb * xcs * xms * lam * xi * (l2 * xc * xm + 1.0);
    s(3, 2) = 2.0 * gamma * zeta * l2 * e_m * xc * xcs * xm * xms * xi;
    s(3, 3) = 2.0 * gamma * xms * xi * (xc * (zeta * zeta * xcs - l2 * xm) - 1.0);
    return out;
}

namespace {

/// Psi and Phi at one frequency from a scattering matrix.
std::pair<Complex, Complex> quadrature_transfer(const Model& m, const Matrix4c& s) {
    const Complex e_m = std::polar(1.0, -m.sys.phase_phi);
    const Complex e_p = std::polar(1.0, m.sys.phase_phi);
    return {s(0, 0) * e_m + s(1, 0) * e_p, s(0, 2) * e_m + s(1, 2) * e_p};
}

}  // namespace

TransferPair transfer_functions(const Model& m, double omega) {
    const auto [psi, phi] = quadrature_transfer(m, scattering_numeric(m, omega).s);
    const auto [psi_m, phi_m] = quadrature_transfer(m, scattering_numeric(m, -omega).s);

    TransferPair t;
    t.omega = omega;
    t.psi = psi;
    t.phi = phi;
    t.psi_star = std::conj(psi_m);
    t.phi_star = std::conj(phi_m);
    return t;
}

double mechanical_response(const Model& m, double omega) {
    const TransferPair t = transfer_functions(m, omega);
    // Phi[-w] Phi*[w] = |Phi[-w]|^2 and Phi[w] Phi*[-w] = |Phi[w]|^2
    // under the star convention.
    return 0.5 * (std::norm(t.phi_star) + std::norm(t.phi));
}

Correlations correlation_coefficients(const Model& m) {
    Correlations c;
    c.n_fb = m.der.n_fb;
    c.m_fb = m.der.m_fb;
    c.p_fb = m.der.p_fb;
    c.kappa_ratio = m.der.kappa / m.der.kappa_fb;
    return c;
}

namespace detail {

double added_noise_from_psi(const Model& m, Complex psi_w, Complex psi_mw, double r_m) {
    if (!(r_m > kResponseGuard)) {
        throw ZeroResponse("mechanical response underflow; added noise undefined");
    }
    const Correlations c = correlation_coefficients(m);
    const Complex e_p = std::polar(1.0, m.sys.phase_phi);

    // The detection-inefficiency excess of n_fb is phase insensitive: it
    // enters the normal-ordered correlators only, not the anomalous <cc>
    // ones.  With the full n_fb in both, the assembly contradicts the
    // closed-form RWA noise for eta < 1; with the split it reproduces it
    // identically at every frequency and phase.
    const double n_anomalous = m.sys.eta * c.n_fb;

    const Complex t1c = 2.0 * psi_w * psi_mw * (n_anomalous - c.m_fb);
    const double t1 = 2.0 * t1c.real();
    const double t2 = (std::norm(psi_w) + std::norm(psi_mw)) *
                      (2.0 * c.n_fb + c.kappa_ratio - 2.0 * c.m_fb.real());
    const double t3 = 2.0;
    const Complex sum_psi = psi_w + psi_mw;
    const double t4 = -2.0 * sum_psi.real() * 2.0 * (e_p * std::conj(c.p_fb)).real();
    const double t5 = -2.0 * (e_p * sum_psi).real() *
                      std::sqrt(m.sys.kappa2 / m.der.kappa_fb);

    return (t1 + t2 + t3 + t4 + t5) / (2.0 * r_m);
}

}  // namespace detail

double added_noise_general(const Model& m, double omega) {
    const auto [psi_w, phi_w] = quadrature_transfer(m, scattering_numeric(m, omega).s);
    const auto [psi_mw, phi_mw] = quadrature_transfer(m, scattering_numeric(m, -omega).s);
    const double r_m = 0.5 * (std::norm(phi_w) + std::norm(phi_mw));
    return detail::added_noise_from_psi(m, psi_w, psi_mw, r_m);
}

namespace rwa {

namespace {

/// |denominator|^2 of the rotating-wave transfer fractions.
double denom_norm(double omega, double gamma, double kappa, double cooperativity,
                  double zeta, double phi) {
    const Complex g_iw{gamma, -omega};
    const Complex den = (cooperativity + 1.0) * gamma * kappa -
                        2.0 * zeta * g_iw * std::cos(phi) -
                        kI * omega * (gamma + kappa) - omega * omega;
    return std::norm(den);
}

}  // namespace

double mechanical_response(double omega, double gamma, double kappa, double kappa2,
                           double cooperativity, double zeta, double phi) {
    const double num = 4.0 * cooperativity * gamma * gamma * kappa * kappa2;
    const double den = denom_norm(omega, gamma, kappa, cooperativity, zeta, phi);
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

double added_noise(double omega, double gamma, double kappa, double kappa2,
                   double cooperativity, double zeta, double phi, double eta) {
    (void)phi;  // the rotating-wave added noise is phase independent
    const double w2 = omega * omega;
    const double g2 = gamma * gamma;
    const double denom = 4.0 * cooperativity * g2 * kappa * kappa2;
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    const double ck = (cooperativity + 1.0) * gamma * kappa;
    double n = (w2 * (g2 - 2.0 * cooperativity * gamma * kappa + kappa * kappa) +
                ck * ck - denom + w2 * w2) /
               denom;
    if (eta < 1.0) {
        n += (w2 + g2) * (1.0 - eta) * zeta * zeta /
             (2.0 * cooperativity * g2 * eta * kappa * kappa2);
    }
    return n;
}

}  // namespace rwa

double mechanical_response_rwa(const Model& m, double omega) {
    return rwa::mechanical_response(omega, m.sys.gamma, m.der.kappa, m.sys.kappa2,
                                    m.der.cooperativity, m.der.zeta, m.sys.phase_phi);
}

double added_noise_rwa(const Model& m, double omega) {
    return rwa::added_noise(omega, m.sys.gamma, m.der.kappa, m.sys.kappa2,
                            m.der.cooperativity, m.der.zeta, m.sys.phase_phi, m.sys.eta);
}

NoiseBudget noise_force_spectrum(const Model& m, double omega, double nbar) {
    NoiseBudget b;
    b.omega = omega;
    b.r_m = mechanical_response(m, omega);
    b.n_add = added_noise_general(m, omega);
    b.s_nn = 2.0 * constants::hbar * m.sys.mass * m.sys.gamma * m.sys.omega_m * b.r_m *
             ((nbar + 0.5) + b.n_add);
    return b;
}

Complex force_estimator(const Model& m, double omega,
                        const std::function<Complex(double)>& force_spectrum) {
    const TransferPair t = transfer_functions(m, omega);
    return 0.5 * (t.phi_star * force_spectrum(omega - m.sys.omega_m) -
                  t.phi * force_spectrum(omega + m.sys.omega_m));
}

}  // namespace inloop
