#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "inloop/grid.hpp"
#include "inloop/params.hpp"

namespace inloop {

// =============================================================================
// Parameter-space exploration
// =============================================================================

struct RegionCell {
    std::optional<double> r_m0;    ///< on-resonance response; empty when masked
    std::optional<double> n_add0;  ///< on-resonance added noise; empty when masked
    bool amplifying = false;       ///< r_m0 > 1
    bool sub_sql = false;          ///< n_add0 < 1/2
    bool unstable = false;         ///< Routh-Hurwitz violated; cell masked
};

struct RegionMap {
    AxisSpec axis1;  ///< cooperativity grid (outer, row index)
    AxisSpec axis2;  ///< zeta/kappa grid (inner, column index)
    std::vector<RegionCell> cells;  ///< row-major, axis1-major

    [[nodiscard]] const RegionCell& at(int i1, int i2) const {
        return cells[static_cast<std::size_t>(i1) * static_cast<std::size_t>(axis2.n) +
                     static_cast<std::size_t>(i2)];
    }
};

/// On-resonance response, added noise and stability over a
/// (cooperativity, zeta/kappa) grid.  Default route is the closed-form
/// rotating-wave pair; `exact` switches to the matrix-inversion route for
/// validation.  Per-cell failures mask the cell, never abort the scan.
[[nodiscard]] RegionMap region_map(const SystemParams& base, const AxisSpec& coop_axis,
                                   const AxisSpec& zeta_over_kappa_axis, bool exact = false);

enum class SweepAxis {
    cooperativity,
    zeta_over_kappa,
    omega_over_kappa,
    temperature,
    kappa2_over_kappa,
    eta,
};

[[nodiscard]] SweepAxis sweep_axis_from_name(const std::string& name);
[[nodiscard]] std::string to_string(SweepAxis axis);

/// One computed record of a sweep; values align with SweepTable::columns.
/// A row that failed carries the error text and NaN values.
struct SweepRow {
    double axis_value = 0.0;
    std::vector<double> values;
    std::optional<std::string> error;
};

struct SweepTable {
    AxisSpec axis;
    std::vector<std::string> columns;  ///< excludes the leading axis column
    std::vector<SweepRow> rows;        ///< ordered by axis value
    std::vector<std::pair<std::string, std::string>> metadata;
};

struct SweepRequest {
    SweepAxis axis = SweepAxis::omega_over_kappa;
    AxisSpec grid;
    std::vector<std::string> columns;  ///< empty selection: metadata-only table
    bool exact = false;
    bool with_floquet = false;
};

/// Known column names a sweep can produce.
[[nodiscard]] const std::vector<std::string>& sweep_column_names();

/// Rows are computed independently (parallel over the grid, deterministic
/// gather) and failures are recorded per row.
[[nodiscard]] SweepTable sweep(const SystemParams& base, const SweepRequest& request);

/// Static-chunk parallel loop; worker count from SENSOR_THREADS (hint only,
/// results are index-deterministic).  fn must only write state owned by its
/// index and must not throw.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Full parameter echo (tool version plus every input in ratio form) used as
/// table metadata.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> parameter_echo(
    const SystemParams& p);

}  // namespace inloop
