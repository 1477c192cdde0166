#pragma once

#include <string>
#include <utility>
#include <vector>

#include "inloop/scan.hpp"

namespace inloop {

enum class OutputFormat { csv, json };

/// Flat numeric table: what every command ultimately emits.  Cells are
/// doubles; flags are 0/1; masked or failed cells are NaN and serialize as
/// an empty CSV field / JSON null.
struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

[[nodiscard]] Table to_table(const SweepTable& sweep);
[[nodiscard]] Table to_table(const RegionMap& map,
                             std::vector<std::pair<std::string, std::string>> metadata);

/// CSV: '#'-prefixed metadata lines, one header row with exact column names,
/// newline-terminated data rows, decimal floating text at 17 significant
/// digits, UTF-8.
[[nodiscard]] std::string emit_csv(const Table& table);

/// JSON: same fields, metadata object first (insertion-ordered).
[[nodiscard]] std::string emit_json(const Table& table);

[[nodiscard]] std::string emit_table(const Table& table, OutputFormat format);

/// 17-significant-digit text for a double; round-trips bit exactly.
[[nodiscard]] std::string format_number(double v);

}  // namespace inloop
