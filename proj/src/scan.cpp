#include "inloop/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "inloop/constants.hpp"
#include "inloop/floquet.hpp"
#include "inloop/metrics.hpp"
#include "inloop/response.hpp"
#include "inloop/stability.hpp"
#include "inloop/version.hpp"

namespace inloop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned worker_count(std::size_t n) {
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("SENSOR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 256) {
            workers = static_cast<unsigned>(v);
        }
    }
    if (workers == 0) workers = 1;
    return static_cast<unsigned>(std::min<std::size_t>(workers, n));
}

}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

RegionMap region_map(const SystemParams& base, const AxisSpec& coop_axis,
                     const AxisSpec& zeta_over_kappa_axis, bool exact) {
    RegionMap map;
    map.axis1 = coop_axis;
    map.axis2 = zeta_over_kappa_axis;
    map.cells.resize(static_cast<std::size_t>(coop_axis.n) *
                     static_cast<std::size_t>(zeta_over_kappa_axis.n));

    const double kappa = base.kappa();
    const double gamma = base.gamma;
    const double phi = base.phase_phi;
    const double eta = base.eta;
    const double kappa2 = base.kappa2;

    parallel_for(map.cells.size(), [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx) / zeta_over_kappa_axis.n;
        const int i2 = static_cast<int>(idx) % zeta_over_kappa_axis.n;
        const double coop = coop_axis.value(i1);
        const double zeta = zeta_over_kappa_axis.value(i2) * kappa;

        RegionCell cell;
        cell.unstable = !rh::conditions(gamma, kappa, coop, zeta, phi).stable();
        if (!cell.unstable) {
            try {
                double r = kNaN;
                double n = kNaN;
                if (exact) {
                    SystemParams p = base;
                    p.coupling_lambda = coupling_from_cooperativity(coop, kappa, gamma);
                    p.feedback_gain_g = zeta / std::sqrt(2.0 * eta * base.kappa1 * kappa2);
                    const Model m = make_model(p);
                    r = mechanical_response(m, 0.0);
                    n = added_noise_general(m, 0.0);
                } else {
                    r = rwa::mechanical_response(0.0, gamma, kappa, kappa2, coop, zeta, phi);
                    n = rwa::added_noise(0.0, gamma, kappa, kappa2, coop, zeta, phi, eta);
                }
                if (!std::isnan(r) && !std::isnan(n)) {
                    cell.r_m0 = r;
                    cell.n_add0 = n;
                    cell.amplifying = r > 1.0;
                    cell.sub_sql = n < 0.5;
                }
            } catch (const Error&) {
                // evaluation failure: cell stays masked, scan continues
            }
        }
        map.cells[idx] = cell;
    });
    return map;
}

// -----------------------------------------------------------------------------
// Sweeps
// -----------------------------------------------------------------------------

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "cooperativity") return SweepAxis::cooperativity;
    if (name == "zeta_over_kappa") return SweepAxis::zeta_over_kappa;
    if (name == "omega_over_kappa") return SweepAxis::omega_over_kappa;
    if (name == "temperature") return SweepAxis::temperature;
    if (name == "kappa2_over_kappa") return SweepAxis::kappa2_over_kappa;
    if (name == "eta") return SweepAxis::eta;
    throw Error("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::cooperativity: return "cooperativity";
        case SweepAxis::zeta_over_kappa: return "zeta_over_kappa";
        case SweepAxis::omega_over_kappa: return "omega_over_kappa";
        case SweepAxis::temperature: return "temperature";
        case SweepAxis::kappa2_over_kappa: return "kappa2_over_kappa";
        case SweepAxis::eta: return "eta";
    }
    throw Error("unhandled sweep axis");
}

const std::vector<std::string>& sweep_column_names() {
    static const std::vector<std::string> names = {
        "r_m",         "n_add",       "r_m_exact", "n_add_exact",
        "r_m_brwa",    "n_add_brwa",  "s_nn_N2_per_Hz",
        "snr",         "sensitivity_N_per_sqrtHz", "fwhm_rad_s",
        "c1",          "c2",          "c3",        "c4",
        "stable",      "amplifying",  "sub_sql",
    };
    return names;
}

namespace {

/// Feedback gain reproducing the requested zeta on (eta, kappa1, kappa2).
double gain_for_zeta(double zeta, double eta, double kappa1, double kappa2) {
    if (zeta == 0.0) return 0.0;
    const double denom = std::sqrt(2.0 * eta * kappa1 * kappa2);
    if (denom == 0.0) throw InvalidParameter("requested zeta unreachable at eta = 0");
    return zeta / denom;
}

struct RowSetup {
    SystemParams params;
    double omega = 0.0;
};

RowSetup row_setup(const SystemParams& base, SweepAxis axis, double value) {
    RowSetup r{base, 0.0};
    const double kappa = base.kappa();
    const double zeta_base =
        base.feedback_gain_g * std::sqrt(2.0 * base.eta * base.kappa1 * base.kappa2);
    switch (axis) {
        case SweepAxis::cooperativity:
            r.params.coupling_lambda =
                coupling_from_cooperativity(value, kappa, base.gamma);
            break;
        case SweepAxis::zeta_over_kappa:
            r.params.feedback_gain_g =
                gain_for_zeta(value * kappa, base.eta, base.kappa1, base.kappa2);
            break;
        case SweepAxis::omega_over_kappa:
            r.omega = value * kappa;
            break;
        case SweepAxis::temperature:
            r.params.temperature = value;
            break;
        case SweepAxis::kappa2_over_kappa:
            r.params.kappa2 = value * kappa;
            r.params.kappa1 = kappa - r.params.kappa2;
            // curves are parameterized by zeta/kappa: re-derive g per row
            r.params.feedback_gain_g =
                gain_for_zeta(zeta_base, base.eta, r.params.kappa1, r.params.kappa2);
            break;
        case SweepAxis::eta:
            r.params.eta = value;
            r.params.feedback_gain_g =
                gain_for_zeta(zeta_base, value, base.kappa1, base.kappa2);
            break;
    }
    return r;
}

class RowEvaluator {
public:
    RowEvaluator(const Model& m, double omega) : m_(m), omega_(omega) {}

    double value(const std::string& column) {
        if (column == "r_m") {
            return mechanical_response_rwa(m_, omega_);
        }
        if (column == "n_add") {
            return added_noise_rwa(m_, omega_);
        }
        if (column == "r_m_exact") {
            return mechanical_response(m_, omega_);
        }
        if (column == "n_add_exact") {
            return added_noise_general(m_, omega_);
        }
        if (column == "r_m_brwa") {
            return floquet().r_m_brwa;
        }
        if (column == "n_add_brwa") {
            return floquet().n_add_brwa;
        }
        if (column == "s_nn_N2_per_Hz") {
            return 2.0 * constants::hbar * m_.sys.mass * m_.sys.gamma * m_.sys.omega_m *
                   value("r_m") * (m_.der.nbar + 0.5 + value("n_add"));
        }
        if (column == "snr") {
            return snr(m_, omega_, m_.der.nbar, 1.0);
        }
        if (column == "sensitivity_N_per_sqrtHz") {
            return sensitivity(m_, omega_, m_.der.nbar);
        }
        if (column == "fwhm_rad_s") {
            return fwhm(m_);
        }
        if (column == "c1") return report().c1;
        if (column == "c2") return report().c2;
        if (column == "c3") return report().c3;
        if (column == "c4") return report().c4;
        if (column == "stable") return report().stable_rh ? 1.0 : 0.0;
        if (column == "amplifying") {
            return value("r_m") > 1.0 ? 1.0 : 0.0;
        }
        if (column == "sub_sql") {
            return value("n_add") < 0.5 ? 1.0 : 0.0;
        }
        throw Error("unknown sweep column '" + column + "'");
    }

private:
    const FloquetResponse& floquet() {
        if (!floquet_) floquet_ = floquet_response(m_, omega_);
        return *floquet_;
    }
    const StabilityReport& report() {
        if (!report_) report_ = routh_hurwitz(m_);
        return *report_;
    }

    const Model& m_;
    double omega_;
    std::optional<FloquetResponse> floquet_;
    std::optional<StabilityReport> report_;
};

}  // namespace

std::vector<std::pair<std::string, std::string>> parameter_echo(const SystemParams& p) {
    const double kappa = p.kappa();
    const double zeta = p.feedback_gain_g * std::sqrt(2.0 * p.eta * p.kappa1 * p.kappa2);
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    return {
        {"tool", "inloop"},
        {"version", std::string(version)},
        {"omega_m_hz", num(p.omega_m / (2.0 * constants::pi))},
        {"kappa_over_omega_m", num(kappa / p.omega_m)},
        {"gamma_over_omega_m", num(p.gamma / p.omega_m)},
        {"kappa2_over_kappa", num(p.kappa2 / kappa)},
        {"cooperativity", num(p.coupling_lambda * p.coupling_lambda / (kappa * p.gamma))},
        {"lambda_over_omega_m", num(p.coupling_lambda / p.omega_m)},
        {"zeta_over_kappa", num(zeta / kappa)},
        {"feedback_gain_g", num(p.feedback_gain_g)},
        {"phi_rad", num(p.phase_phi)},
        {"eta", num(p.eta)},
        {"mass_kg", num(p.mass)},
        {"temperature_k", num(p.temperature)},
    };
}

SweepTable sweep(const SystemParams& base, const SweepRequest& request) {
    for (const auto& col : request.columns) {
        const auto& known = sweep_column_names();
        if (std::find(known.begin(), known.end(), col) == known.end()) {
            throw Error("unknown sweep column '" + col + "'");
        }
    }

    SweepTable table;
    table.axis = request.grid;
    table.axis.name = to_string(request.axis);
    table.columns = request.columns;
    table.metadata = parameter_echo(base);
    {
        char buf[32];
        std::string echo = table.axis.name;
        std::snprintf(buf, sizeof buf, ", %.17g", table.axis.lo);
        echo += buf;
        std::snprintf(buf, sizeof buf, ", %.17g", table.axis.hi);
        echo += buf;
        echo += ", " + std::to_string(table.axis.n);
        table.metadata.emplace_back("axis", echo);
    }

    if (request.columns.empty()) return table;  // metadata-only

    table.rows.resize(static_cast<std::size_t>(request.grid.n));
    parallel_for(table.rows.size(), [&](std::size_t i) {
        SweepRow row;
        row.axis_value = table.axis.value(static_cast<int>(i));
        row.values.assign(request.columns.size(), kNaN);
        try {
            const RowSetup setup = row_setup(base, request.axis, row.axis_value);
            const Model m = make_model(setup.params);
            RowEvaluator eval(m, setup.omega);
            for (std::size_t c = 0; c < request.columns.size(); ++c) {
                try {
                    row.values[c] = eval.value(request.columns[c]);
                } catch (const NumericalError& e) {
                    if (!row.error) row.error = e.what();
                }
            }
        } catch (const Error& e) {
            row.error = e.what();
        }
        table.rows[i] = row;
    });
    return table;
}

}  // namespace inloop
