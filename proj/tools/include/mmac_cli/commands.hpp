#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mmac/config_io.hpp"
#include "mmac/simulate.hpp"

// Command implementations behind the `mmac` executable. Every command
// computes its full output in memory; writing files is left to the caller so
// a failing command never leaves partial output behind.

namespace mmac::cli {

enum class ExitCode : int { ok = 0, usage = 2, numerical = 3 };

/// A CSV cell: empty, a number (printed with 12 significant digits) or text.
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    std::string to_csv() const;
};

/// A named output: `name` is the file stem ("fig4", "fig4_theta", ...).
struct NamedTable {
    std::string name;
    Table table;
};

struct CommandOutput {
    std::vector<NamedTable> tables;
    /// JSON sidecar text (config echo, version, seed, command-specific data).
    std::string sidecar;
};

enum class SweepVar { snr_db, g_mag2, theta, alpha, n };

struct SweepSpec {
    SweepVar variable = SweepVar::snr_db;
    std::vector<double> values;

    /// Parses "VAR=v1,v2,..." with VAR one of snr_db, g_mag2, theta, alpha, n
    /// (case-insensitive). Throws config_error on malformed input.
    static SweepSpec parse(const std::string& text);
    std::string variable_name() const;
    /// base with the swept variable set to value; throws config_error when
    /// the value is outside the variable's domain.
    Scenario apply(const Scenario& base, double value) const;
};

enum class ErrorMode { ser_sync, ser_async, ber_sync, ber_async };
ErrorMode parse_error_mode(const std::string& text);
std::string to_string(ErrorMode mode);

struct McSettings {
    std::uint64_t trials = 100000;  // 0 disables the Monte Carlo column
    std::uint64_t seed = 1;
    RunOptions run{};
};

CommandOutput cmd_rate_region(const Scenario& base, const std::optional<SweepSpec>& sweep);
CommandOutput cmd_convexity(const Scenario& base, const std::optional<SweepSpec>& sweep);
CommandOutput cmd_threshold(const std::vector<double>& lambdas);
CommandOutput cmd_error_rates(const Scenario& base, ErrorMode mode, const std::optional<SweepSpec>& sweep,
                              const McSettings& mc);
CommandOutput cmd_mi(const Scenario& base, const std::optional<SweepSpec>& sweep, const McSettings& mc);

/// Known ids: fig4 ... fig11. Throws config_error for unknown ids.
CommandOutput cmd_figure(const std::string& id, const McSettings& mc);
const std::vector<std::string>& figure_ids();

/// Seed used for the i-th point of a sweep.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index);

/// Scenario used by the detection figures: SNR 10 dB, rho 0.5,
/// |g|^2 rho = 0.1, uniform phase, on/off tag, QPSK, N = 1.
Scenario detection_scenario();

} // namespace mmac::cli
