#include "inloop/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "inloop/metrics.hpp"
#include "inloop/response.hpp"
#include "inloop/stability.hpp"

namespace inloop {

namespace {

std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& cfg) {
    auto meta = parameter_echo(cfg.params);
    meta.emplace_back("command", to_string(cfg.command));
    meta.emplace_back("exact", cfg.exact ? "1" : "0");
    meta.emplace_back("floquet", cfg.floquet ? "1" : "0");
    return meta;
}

Table single_row(const RunConfig& cfg, std::vector<std::string> columns,
                 std::vector<double> values) {
    Table t;
    t.metadata = run_metadata(cfg);
    t.columns = std::move(columns);
    t.rows.push_back(std::move(values));
    return t;
}

Table run_derive(const RunConfig& cfg) {
    const Model m = make_model(cfg.params);
    const DerivedParams& d = m.der;
    return single_row(
        cfg,
        {"zeta_over_kappa", "kappa_fb_over_kappa", "n_fb", "m_fb_re", "m_fb_im", "p_fb_re",
         "p_fb_im", "cooperativity", "nbar", "x_zpf_m", "resolved_sideband"},
        {d.zeta / d.kappa, d.kappa_fb / d.kappa, d.n_fb, d.m_fb.real(), d.m_fb.imag(),
         d.p_fb.real(), d.p_fb.imag(), d.cooperativity, d.nbar, d.x_zpf,
         cfg.params.resolved_sideband() ? 1.0 : 0.0});
}

Table run_stability(const RunConfig& cfg) {
    const Model m = make_model(cfg.params);
    const StabilityReport r = stability_report(m);
    return single_row(cfg,
                      {"c1", "c2", "c3", "c4", "stable", "margin",
                       "max_real_eigenvalue_rad_s", "stable_eig"},
                      {r.c1, r.c2, r.c3, r.c4, r.stable_rh ? 1.0 : 0.0, r.margin,
                       r.max_real_eigenvalue, r.stable_eig ? 1.0 : 0.0});
}

Table run_fwhm(const RunConfig& cfg) {
    const Model m = make_model(cfg.params);
    const double width = fwhm(m);
    return single_row(cfg, {"fwhm_rad_s", "fwhm_over_kappa"},
                      {width, width / m.der.kappa});
}

Table run_sweep_command(const RunConfig& cfg) {
    SweepRequest req;
    req.exact = cfg.exact;
    req.with_floquet = cfg.floquet;

    switch (cfg.command) {
        case Command::spectrum:
            req.axis = SweepAxis::omega_over_kappa;
            req.columns = {"r_m", "n_add", "s_nn_N2_per_Hz", "snr",
                           "sensitivity_N_per_sqrtHz", "amplifying", "sub_sql"};
            break;
        case Command::floquet:
            req.axis = SweepAxis::omega_over_kappa;
            req.with_floquet = true;
            req.columns = {"r_m", "n_add", "r_m_brwa", "n_add_brwa"};
            break;
        case Command::sensitivity:
            req.axis = SweepAxis::omega_over_kappa;
            req.columns = {"sensitivity_N_per_sqrtHz", "snr", "n_add"};
            break;
        case Command::sweep:
            if (!cfg.axis) throw ConfigError("sweep needs grid.axis");
            req.axis = sweep_axis_from_name(cfg.axis->name);
            req.columns = {"r_m", "n_add", "stable", "amplifying", "sub_sql"};
            break;
        default:
            throw Error("not a sweep command");
    }
    if (!cfg.axis && cfg.command != Command::sensitivity) {
        throw ConfigError("command '" + to_string(cfg.command) + "' needs grid.axis");
    }

    if (cfg.axis) {
        req.grid = *cfg.axis;
    } else {
        // sensitivity without a grid: the single on-resonance point
        req.grid = AxisSpec{"omega_over_kappa", 0.0, 0.0, 1};
    }
    if (!cfg.columns.empty()) req.columns = cfg.columns;
    if (req.exact) {
        for (const char* extra : {"r_m_exact", "n_add_exact"}) {
            if (std::find(req.columns.begin(), req.columns.end(), extra) ==
                req.columns.end()) {
                req.columns.emplace_back(extra);
            }
        }
    }
    if (req.with_floquet) {
        for (const char* extra : {"r_m_brwa", "n_add_brwa"}) {
            if (std::find(req.columns.begin(), req.columns.end(), extra) ==
                req.columns.end()) {
                req.columns.emplace_back(extra);
            }
        }
    }

    SweepTable table = sweep(cfg.params, req);
    table.metadata.emplace_back("command", to_string(cfg.command));
    table.metadata.emplace_back("exact", cfg.exact ? "1" : "0");
    table.metadata.emplace_back("floquet", req.with_floquet ? "1" : "0");
    return to_table(table);
}

Table run_region(const RunConfig& cfg) {
    if (!cfg.axis1 || !cfg.axis2) throw ConfigError("region needs grid.axis1 and grid.axis2");
    const RegionMap map = region_map(cfg.params, *cfg.axis1, *cfg.axis2, cfg.exact);
    auto meta = run_metadata(cfg);
    const auto axis_echo = [&meta](const char* key, const AxisSpec& a) {
        meta.emplace_back(key, a.name + ", " + format_number(a.lo) + ", " +
                                   format_number(a.hi) + ", " + std::to_string(a.n));
    };
    axis_echo("axis1", *cfg.axis1);
    axis_echo("axis2", *cfg.axis2);
    return to_table(map, std::move(meta));
}

}  // namespace

Table run_to_table(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::derive: return run_derive(cfg);
        case Command::stability: return run_stability(cfg);
        case Command::fwhm: return run_fwhm(cfg);
        case Command::region: return run_region(cfg);
        case Command::spectrum:
        case Command::sensitivity:
        case Command::floquet:
        case Command::sweep: return run_sweep_command(cfg);
    }
    throw Error("unhandled command");
}

std::size_t run(const RunConfig& cfg) {
    const Table table = run_to_table(cfg);
    const std::string bytes = emit_table(table, cfg.format);

    if (cfg.output_path.empty()) {
        std::cout << bytes;
        if (!std::cout) throw IoError("failed writing to stdout");
    } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) throw IoError("cannot open '" + cfg.output_path + "' for writing");
        out << bytes;
        if (!out) throw IoError("failed writing '" + cfg.output_path + "'");
    }
    return table.rows.size();
}

}  // namespace inloop
