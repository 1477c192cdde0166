#pragma once

#include "inloop/config.hpp"
#include "inloop/table.hpp"

namespace inloop {

/// Executes one parsed configuration and returns the result table.
/// Deterministic: no randomness, no timestamps; worker count never affects
/// the contents.
[[nodiscard]] Table run_to_table(const RunConfig& cfg);

/// Runs and writes the emitted table to cfg.output_path (stdout when empty).
/// Returns the number of data rows written.  Throws IoError on write failure.
std::size_t run(const RunConfig& cfg);

/// Exit codes for the command line surface.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_error = 3,
    exit_io_error = 4,
};

}  // namespace inloop
