#include "inloop/table.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

namespace inloop {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Table to_table(const SweepTable& sweep) {
    Table t;
    t.metadata = sweep.metadata;
    t.columns.push_back(sweep.axis.name);
    for (const auto& c : sweep.columns) t.columns.push_back(c);
    t.rows.reserve(sweep.rows.size());
    for (const auto& row : sweep.rows) {
        std::vector<double> r;
        r.reserve(1 + row.values.size());
        r.push_back(row.axis_value);
        r.insert(r.end(), row.values.begin(), row.values.end());
        t.rows.push_back(std::move(r));
    }
    return t;
}

Table to_table(const RegionMap& map,
               std::vector<std::pair<std::string, std::string>> metadata) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    Table t;
    t.metadata = std::move(metadata);
    t.columns = {map.axis1.name, map.axis2.name, "r_m",     "n_add",
                 "stable",       "amplifying",   "sub_sql"};
    t.rows.reserve(map.cells.size());
    for (int i1 = 0; i1 < map.axis1.n; ++i1) {
        for (int i2 = 0; i2 < map.axis2.n; ++i2) {
            const RegionCell& cell = map.at(i1, i2);
            t.rows.push_back({map.axis1.value(i1), map.axis2.value(i2),
                              cell.r_m0.value_or(nan), cell.n_add0.value_or(nan),
                              cell.unstable ? 0.0 : 1.0, cell.amplifying ? 1.0 : 0.0,
                              cell.sub_sql ? 1.0 : 0.0});
        }
    }
    return t;
}

std::string emit_csv(const Table& table) {
    std::string out;
    for (const auto& [key, value] : table.metadata) {
        out += "# ";
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (!std::isnan(row[c])) out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string emit_json(const Table& table) {
    nlohmann::ordered_json doc;
    auto& meta = doc["metadata"];
    for (const auto& [key, value] : table.metadata) meta[key] = value;
    doc["columns"] = table.columns;
    auto& rows = doc["rows"];
    rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isnan(v)) {
                r.push_back(nullptr);
            } else {
                r.push_back(v);
            }
        }
        rows.push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

std::string emit_table(const Table& table, OutputFormat format) {
    return format == OutputFormat::csv ? emit_csv(table) : emit_json(table);
}

}  // namespace inloop
