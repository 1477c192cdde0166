#include "inloop/floquet.hpp"

#include <cmath>
#include <limits>

namespace inloop {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kConditionLimit = 1e14;

}  // namespace

FloquetBlocks build_floquet(const Model& m) {
    FloquetBlocks f;
    f.a0 = drift_matrix(m).entries;

    const Complex il = kI * m.sys.coupling_lambda;
    f.a_plus.setZero();
    f.a_plus(0, 3) = il;
    f.a_plus(2, 1) = il;
    f.a_minus.setZero();
    f.a_minus(1, 2) = -il;
    f.a_minus(3, 0) = -il;

    const Complex shift = 2.0 * kI * m.sys.omega_m;
    const Matrix4c shift4 = shift * Matrix4c::Identity();

    f.abar.setZero();
    f.abar.block<4, 4>(0, 0) = f.a0 - shift4;
    f.abar.block<4, 4>(0, 4) = f.a_plus;
    f.abar.block<4, 4>(4, 0) = f.a_minus;
    f.abar.block<4, 4>(4, 4) = f.a0;
    f.abar.block<4, 4>(4, 8) = f.a_plus;
    f.abar.block<4, 4>(8, 4) = f.a_minus;
    f.abar.block<4, 4>(8, 8) = f.a0 + shift4;

    const double skfb = std::sqrt(2.0 * m.der.kappa_fb);
    const double sk2 = std::sqrt(2.0 * m.sys.kappa2);
    const double sg = std::sqrt(2.0 * m.sys.gamma);
    f.hbar_mat.setZero();
    f.gbar_mat.setZero();
    for (int i = 0; i < 4; ++i) {
        f.hbar_mat(4 + i, 4 + i) = (i < 2) ? skfb : sg;
        f.gbar_mat(4 + i, 4 + i) = (i < 2) ? sk2 : sg;
    }
    return f;
}

FloquetSolution floquet_solution(const Model& m, double omega) {
    const FloquetBlocks f = build_floquet(m);
    const Matrix12c coeff = kI * omega * Matrix12c::Identity() + f.abar;
    const Eigen::PartialPivLU<Matrix12c> lu(coeff);
    if (!(lu.rcond() > 1.0 / kConditionLimit)) {
        throw SingularAtFrequency("floquet pole at omega = " + std::to_string(omega));
    }

    const Matrix12c rhs = -f.hbar_mat;
    Matrix12c x = lu.solve(rhs);
    x += lu.solve(rhs - coeff * x);  // one refinement step

    FloquetSolution sol;
    sol.omega = omega;
    sol.ubar_transfer = x;

    const Matrix4c central = sol.ubar_transfer.block<4, 4>(4, 4);
    sol.central_scattering = f.gbar_mat.block<4, 4>(4, 4) * central;
    return sol;
}

namespace {

std::pair<Complex, Complex> central_transfer(const Model& m, double omega) {
    const Matrix4c s = floquet_solution(m, omega).central_scattering;
    const Complex e_m = std::polar(1.0, -m.sys.phase_phi);
    const Complex e_p = std::polar(1.0, m.sys.phase_phi);
    return {s(0, 0) * e_m + s(1, 0) * e_p, s(0, 2) * e_m + s(1, 2) * e_p};
}

}  // namespace

FloquetResponse floquet_response(const Model& m, double omega) {
    const auto [psi_w, phi_w] = central_transfer(m, omega);
    const auto [psi_mw, phi_mw] = central_transfer(m, -omega);

    FloquetResponse r;
    r.r_m_brwa = 0.5 * (std::norm(phi_w) + std::norm(phi_mw));
    if (r.r_m_brwa > 1e-300) {
        r.n_add_brwa = detail::added_noise_from_psi(m, psi_w, psi_mw, r.r_m_brwa);
    } else {
        r.n_add_brwa = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace inloop
