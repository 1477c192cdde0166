// Command line surface: parse a config document, run the requested
// computation and emit the result table as CSV or JSON.
//
// Exit codes: 0 ok, 2 config error, 3 numerical singularity, 4 I/O error.
// SENSOR_THREADS caps the worker count (performance only, never results).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "inloop/runner.hpp"
#include "inloop/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"inloop - frequency-domain simulator of a feedback-controlled "
                 "optomechanical force sensor"};
    app.set_version_flag("--version", std::string(inloop::version));

    std::string config_path;
    std::string output_path;
    std::string format;
    bool exact = false;
    bool floquet = false;
    bool quiet = false;

    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--output", output_path, "output path (default: config value or stdout)");
    app.add_option("--format", format, "csv or json (default: config value or csv)");
    app.add_flag("--exact", exact, "matrix-inversion route instead of closed forms");
    app.add_flag("--floquet", floquet, "add beyond-RWA sideband columns");
    app.add_flag("--quiet", quiet, "suppress the summary line");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config '" << config_path << "'\n";
            return inloop::exit_io_error;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();

        inloop::RunConfig cfg = inloop::parse_config(buffer.str());
        if (!output_path.empty()) cfg.output_path = output_path;
        if (!format.empty()) {
            if (format == "csv") {
                cfg.format = inloop::OutputFormat::csv;
            } else if (format == "json") {
                cfg.format = inloop::OutputFormat::json;
            } else {
                std::cerr << "error: --format must be csv or json\n";
                return inloop::exit_config_error;
            }
        }
        cfg.exact = cfg.exact || exact;
        cfg.floquet = cfg.floquet || floquet;
        cfg.quiet = cfg.quiet || quiet;

        const std::size_t rows = inloop::run(cfg);
        if (!cfg.quiet) {
            std::cerr << "wrote " << rows << " row" << (rows == 1 ? "" : "s") << " to "
                      << (cfg.output_path.empty() ? "<stdout>" : cfg.output_path) << "\n";
        }
        return inloop::exit_ok;
    } catch (const inloop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return inloop::exit_config_error;
    } catch (const inloop::InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return inloop::exit_config_error;
    } catch (const inloop::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return inloop::exit_numerical_error;
    } catch (const inloop::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return inloop::exit_io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return inloop::exit_numerical_error;
    }
}
