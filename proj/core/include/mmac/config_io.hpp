#pragma once

#include <filesystem>
#include <string>

#include "mmac/model.hpp"

namespace mmac {

/// A scenario file: the system parameters plus the delay offset ratio.
struct Scenario {
    SystemConfig system{};
    double alpha = 0.0;
};

/// Parses a JSON scenario object with fields
///   snr_db, rho, g_mag2, theta (number or "uniform"), n, tag {c1, c0}
/// (required) and alpha, tx_modulation ("qpsk" | "gaussian") (optional).
/// Unknown fields, wrong types and out-of-domain values throw config_error.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Inverse of parse_scenario; used for output sidecars.
std::string scenario_to_json(const Scenario& scenario, int indent = 2);

/// Reference scenario: SNR 10 dB, rho 0.5, |g|^2 0.1, theta pi/4, N 1,
/// BPSK tag, QPSK Tx, alpha 0.
Scenario default_scenario();

} // namespace mmac
