#include "inloop/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "inloop/constants.hpp"
#include "inloop/scan.hpp"

namespace inloop {

Command command_from_name(const std::string& name) {
    static const std::map<std::string, Command> names = {
        {"derive", Command::derive},
        {"spectrum", Command::spectrum},
        {"region", Command::region},
        {"fwhm", Command::fwhm},
        {"sensitivity", Command::sensitivity},
        {"floquet", Command::floquet},
        {"stability", Command::stability},
        {"sweep", Command::sweep},
    };
    const auto it = names.find(name);
    if (it == names.end()) throw ConfigError("unknown command '" + name + "'");
    return it->second;
}

std::string to_string(Command c) {
    switch (c) {
        case Command::derive: return "derive";
        case Command::spectrum: return "spectrum";
        case Command::region: return "region";
        case Command::fwhm: return "fwhm";
        case Command::sensitivity: return "sensitivity";
        case Command::floquet: return "floquet";
        case Command::stability: return "stability";
        case Command::sweep: return "sweep";
    }
    throw ConfigError("unhandled command");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream stream(s);
    std::string item;
    while (std::getline(stream, item, ',')) parts.push_back(trim(item));
    return parts;
}

/// One parsed key with its source line, for diagnostics.
struct Entry {
    std::string value;
    int line = 0;
};

class Document {
public:
    explicit Document(const std::string& text) {
        std::stringstream stream(text);
        std::string raw;
        int lineno = 0;
        std::string section;
        while (std::getline(stream, raw)) {
            ++lineno;
            std::string line = trim(raw);
            const auto comment = line.find('#');
            if (comment != std::string::npos) line = trim(line.substr(0, comment));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ParseError(lineno, "malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section != "run" && section != "params" && section != "grid" &&
                    section != "output") {
                    throw ParseError(lineno, "unknown section [" + section + "]");
                }
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
            if (section.empty()) throw ParseError(lineno, "key outside of any section");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ParseError(lineno, "empty key");
            if (value.empty()) throw ParseError(lineno, "empty value for '" + key + "'");
            const std::string full = section + "." + key;
            if (entries_.count(full)) {
                throw ParseError(lineno, "duplicate key '" + key + "' in [" + section + "]");
            }
            entries_[full] = Entry{value, lineno};
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) > 0; }

    [[nodiscard]] const Entry& at(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw MissingKey("missing required key '" + key + "'");
        return it->second;
    }

    [[nodiscard]] double number(const std::string& key) const {
        const Entry& e = at(key);
        const std::string& v = e.value;
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw ParseError(e.line, "not a number: '" + v + "'");
        }
        return out;
    }

    [[nodiscard]] double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    /// Marks keys as consumed so leftovers can be reported as unknown.
    void consume(const std::string& key) { consumed_.insert(key); }

    void reject_unconsumed() const {
        for (const auto& [key, entry] : entries_) {
            if (!consumed_.count(key)) {
                throw ParseError(entry.line, "unknown key '" + key + "'");
            }
        }
    }

private:
    std::map<std::string, Entry> entries_;
    std::set<std::string> consumed_;
};

AxisSpec parse_axis(const Document& doc, const std::string& key) {
    const Entry& e = doc.at(key);
    const auto parts = split_list(e.value);
    if (parts.size() != 4) {
        throw ParseError(e.line, key + " must be 'name, lo, hi, n'");
    }
    AxisSpec axis;
    axis.name = parts[0];
    const auto num = [&](const std::string& s) {
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ParseError(e.line, "not a number: '" + s + "'");
        }
        return out;
    };
    axis.lo = num(parts[1]);
    axis.hi = num(parts[2]);
    const double n = num(parts[3]);
    if (n < 1.0 || n != std::floor(n) || n > 1e7) {
        throw ParseError(e.line, "grid size must be a positive integer");
    }
    axis.n = static_cast<int>(n);
    if (!(axis.lo <= axis.hi)) throw ParseError(e.line, "grid bounds must satisfy lo <= hi");
    return axis;
}

double pick_one_of(const Document& doc, const std::string& a, const std::string& b,
                   bool& picked_first) {
    const bool has_a = doc.has(a);
    const bool has_b = doc.has(b);
    if (has_a && has_b) {
        throw ConflictingKeys("give exactly one of '" + a + "' and '" + b + "'");
    }
    if (!has_a && !has_b) {
        throw MissingKey("one of '" + a + "' and '" + b + "' is required");
    }
    picked_first = has_a;
    return doc.number(has_a ? a : b);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    Document doc(text);
    RunConfig cfg;

    doc.consume("run.command");
    cfg.command = command_from_name(doc.at("run.command").value);

    // --- physical parameters -------------------------------------------------
    for (const char* key :
         {"params.omega_m_hz", "params.kappa_over_omega_m", "params.gamma_over_omega_m",
          "params.kappa2_over_kappa", "params.cooperativity", "params.lambda_over_omega_m",
          "params.zeta_over_kappa", "params.feedback_gain_g", "params.phi_rad", "params.eta",
          "params.mass_kg", "params.temperature_k"}) {
        doc.consume(key);
    }

    const double omega_m_hz = doc.number("params.omega_m_hz");
    if (!(omega_m_hz > 0.0)) throw ConfigError("omega_m_hz must be > 0");
    const double omega_m = 2.0 * constants::pi * omega_m_hz;
    const double kappa = doc.number("params.kappa_over_omega_m") * omega_m;
    const double gamma = doc.number("params.gamma_over_omega_m") * omega_m;
    const double k2_frac = doc.number("params.kappa2_over_kappa");
    if (!(k2_frac > 0.0 && k2_frac < 1.0)) {
        throw ConfigError("kappa2_over_kappa must be in (0, 1)");
    }

    SystemParams& p = cfg.params;
    p.omega_m = omega_m;
    p.gamma = gamma;
    p.kappa2 = k2_frac * kappa;
    p.kappa1 = kappa - p.kappa2;
    p.phase_phi = doc.number_or("params.phi_rad", 0.0);
    p.eta = doc.number_or("params.eta", 1.0);
    p.mass = doc.number_or("params.mass_kg", 1e-12);
    p.temperature = doc.number_or("params.temperature_k", 0.0);

    bool gave_coop = false;
    const double coupling_value =
        pick_one_of(doc, "params.cooperativity", "params.lambda_over_omega_m", gave_coop);
    p.coupling_lambda = gave_coop
                            ? coupling_from_cooperativity(coupling_value, kappa, gamma)
                            : coupling_value * omega_m;

    const double zeta_or_g = pick_one_of(doc, "params.zeta_over_kappa",
                                         "params.feedback_gain_g", cfg.zeta_primary);
    if (cfg.zeta_primary) {
        const double zeta = zeta_or_g * kappa;
        if (zeta == 0.0) {
            p.feedback_gain_g = 0.0;
        } else {
            const double denom = std::sqrt(2.0 * p.eta * p.kappa1 * p.kappa2);
            if (denom == 0.0) throw ConfigError("zeta_over_kappa > 0 requires eta > 0");
            p.feedback_gain_g = zeta / denom;
        }
    } else {
        p.feedback_gain_g = zeta_or_g;
    }
    p.validate();

    // --- grids, present iff the command needs them ---------------------------
    doc.consume("grid.axis");
    doc.consume("grid.axis1");
    doc.consume("grid.axis2");
    const bool needs_axis = cfg.command == Command::spectrum ||
                            cfg.command == Command::floquet || cfg.command == Command::sweep;
    const bool allows_axis = needs_axis || cfg.command == Command::sensitivity;

    if (cfg.command == Command::region) {
        if (!doc.has("grid.axis1") || !doc.has("grid.axis2")) {
            throw MissingKey("region needs grid.axis1 and grid.axis2");
        }
        cfg.axis1 = parse_axis(doc, "grid.axis1");
        cfg.axis2 = parse_axis(doc, "grid.axis2");
        if (cfg.axis1->name != "cooperativity" || cfg.axis2->name != "zeta_over_kappa") {
            throw ConfigError("region axes are 'cooperativity' and 'zeta_over_kappa'");
        }
        if (doc.has("grid.axis")) throw ConfigError("region does not take grid.axis");
    } else {
        if (doc.has("grid.axis1") || doc.has("grid.axis2")) {
            throw ConfigError("axis1/axis2 apply to the region command only");
        }
        if (doc.has("grid.axis")) {
            if (!allows_axis) {
                throw ConfigError("command '" + to_string(cfg.command) +
                                  "' does not take a grid");
            }
            cfg.axis = parse_axis(doc, "grid.axis");
            if (cfg.command == Command::spectrum || cfg.command == Command::floquet ||
                cfg.command == Command::sensitivity) {
                if (cfg.axis->name != "omega_over_kappa") {
                    throw ConfigError("this command sweeps omega_over_kappa only");
                }
            } else {
                (void)sweep_axis_from_name(cfg.axis->name);  // validates
            }
        } else if (needs_axis) {
            throw MissingKey("command '" + to_string(cfg.command) + "' needs grid.axis");
        }
    }

    // --- output ---------------------------------------------------------------
    doc.consume("output.path");
    doc.consume("output.format");
    doc.consume("output.columns");
    if (doc.has("output.path")) cfg.output_path = doc.at("output.path").value;
    if (doc.has("output.format")) {
        const Entry& e = doc.at("output.format");
        if (e.value == "csv") {
            cfg.format = OutputFormat::csv;
        } else if (e.value == "json") {
            cfg.format = OutputFormat::json;
        } else {
            throw ParseError(e.line, "format must be csv or json");
        }
    }
    if (doc.has("output.columns")) {
        if (!allows_axis) {
            throw ConfigError("output.columns applies to spectrum, floquet, "
                              "sensitivity and sweep only");
        }
        cfg.columns = split_list(doc.at("output.columns").value);
        const auto& known = sweep_column_names();
        for (const auto& c : cfg.columns) {
            if (std::find(known.begin(), known.end(), c) == known.end()) {
                throw ParseError(doc.at("output.columns").line,
                                 "unknown column '" + c + "'");
            }
        }
    }

    doc.reject_unconsumed();
    return cfg;
}

}  // namespace inloop
