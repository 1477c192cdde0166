#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inloop/grid.hpp"
#include "inloop/params.hpp"
#include "inloop/table.hpp"

namespace inloop {

enum class Command { derive, spectrum, region, fwhm, sensitivity, floquet, stability, sweep };

[[nodiscard]] Command command_from_name(const std::string& name);
[[nodiscard]] std::string to_string(Command c);

// =============================================================================
// Run configuration
// =============================================================================
//
// Configs are flat sectioned key = value text.  All frequencies are
// dimensionless ratios anchored by the mechanical frequency in Hz; SI outputs
// use the anchor plus mass and temperature.  Exactly one of
// {cooperativity, lambda_over_omega_m} and one of
// {zeta_over_kappa, feedback_gain_g} may appear.
//
//   [run]
//   command = spectrum        # derive | spectrum | region | fwhm |
//                             # sensitivity | floquet | stability | sweep
//   [params]
//   omega_m_hz = 343.13e3     # required anchor
//   kappa_over_omega_m = 0.06 # required
//   gamma_over_omega_m = 3.4e-6
//   kappa2_over_kappa = 0.5   # required, in (0, 1)
//   cooperativity = 1.0       # or lambda_over_omega_m
//   zeta_over_kappa = 0.25    # or feedback_gain_g
//   phi_rad = 0.0             # optional, default 0
//   eta = 0.6                 # optional, default 1
//   mass_kg = 1e-12           # optional, default 1e-12
//   temperature_k = 300       # optional, default 0
//   [grid]
//   axis  = omega_over_kappa, -3, 3, 241    # 1-D commands
//   axis1 = cooperativity, 0.01, 4, 200     # region only
//   axis2 = zeta_over_kappa, 0, 1, 200      # region only
//   [output]
//   path = out.csv            # optional; stdout when absent
//   format = csv              # csv | json
//   columns = r_m, n_add      # optional output selection for sweeps

struct RunConfig {
    Command command = Command::derive;
    SystemParams params;
    bool zeta_primary = true;  ///< zeta given directly; held fixed across eta/kappa2 rows
    std::optional<AxisSpec> axis;
    std::optional<AxisSpec> axis1;
    std::optional<AxisSpec> axis2;
    std::vector<std::string> columns;
    std::string output_path;  ///< empty: stdout
    OutputFormat format = OutputFormat::csv;
    bool exact = false;
    bool floquet = false;
    bool quiet = false;
};

/// Parses and fully validates a config document.  Unknown keys are rejected.
/// Throws ParseError (with line diagnostics), ConflictingKeys or MissingKey.
[[nodiscard]] RunConfig parse_config(const std::string& text);

}  // namespace inloop
