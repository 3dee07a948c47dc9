#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmac/error.hpp"
#include "mmac/version.hpp"
#include "mmac_cli/commands.hpp"

namespace fs = std::filesystem;
using namespace mmac;
using namespace mmac::cli;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::string sweep;
    std::string mode = "ser_sync";
    std::string threshold;
    std::string figure;
    std::vector<double> lambdas;
    std::uint64_t trials = McSettings{}.trials;
    std::uint64_t seed = McSettings{}.seed;
};

Scenario load_base(const Args& a) {
    if (a.config.empty()) {
        return default_scenario();
    }
    return load_scenario(a.config);
}

std::optional<SweepSpec> load_sweep(const Args& a) {
    if (a.sweep.empty()) {
        return std::nullopt;
    }
    return SweepSpec::parse(a.sweep);
}

McSettings load_mc(const Args& a) {
    McSettings mc;
    mc.trials = a.trials;
    mc.seed = a.seed;
    if (a.threshold == "bisection") {
        mc.run.threshold = ThresholdMethod::bisection;
    } else if (a.threshold == "asymptotic") {
        mc.run.threshold = ThresholdMethod::asymptotic;
    } else if (!a.threshold.empty()) {
        throw config_error("unknown threshold rule '" + a.threshold + "' (bisection, asymptotic)");
    }
    return mc;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
        throw config_error("cannot write " + path.string());
    }
}

// Single-table commands: CSV to --out (sidecar next to it) or to stdout.
void emit(const CommandOutput& o, const std::string& out) {
    const std::string csv = o.tables.front().table.to_csv();
    if (out.empty()) {
        std::cout << csv;
        return;
    }
    fs::path sidecar = out;
    sidecar.replace_extension(".json");
    write_file(out, csv);
    write_file(sidecar, o.sidecar + "\n");
}

// Figures: one CSV per table plus <id>.json in the --out directory.
void emit_bundle(const CommandOutput& o, const std::string& id, const std::string& out) {
    const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) {
        throw config_error("cannot create output directory " + dir.string());
    }
    for (const auto& t : o.tables) {
        write_file(dir / (t.name + ".csv"), t.table.to_csv());
    }
    write_file(dir / (id + ".json"), o.sidecar + "\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate regions, detection error rates and Monte Carlo checks for ambient backscatter links", "mmac"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Args a;

    auto add_config = [&](CLI::App* c) {
        c->add_option("--config", a.config, "Scenario JSON file (default: reference scenario)");
    };
    auto add_out = [&](CLI::App* c, const char* help) { c->add_option("--out", a.out, help); };
    auto add_sweep = [&](CLI::App* c) {
        c->add_option("--sweep", a.sweep, "VAR=v1,v2,... with VAR in snr_db, g_mag2, theta, alpha, n");
    };
    auto add_mc = [&](CLI::App* c) {
        c->add_option("--trials", a.trials, "Monte Carlo trials per point, 0 disables")->capture_default_str();
        c->add_option("--seed", a.seed, "Monte Carlo seed")->capture_default_str();
        c->add_option("--threshold", a.threshold, "Tag threshold rule for Monte Carlo: bisection or asymptotic");
    };
    const char* csv_help = "CSV output path; the JSON sidecar goes next to it (default: CSV to stdout)";

    auto* region = app.add_subcommand("rate-region", "Rate region polygon vertices");
    add_config(region);
    add_out(region, csv_help);
    add_sweep(region);

    auto* convexity = app.add_subcommand("convexity", "Convexity slopes r1, r2 of the rate region");
    add_config(convexity);
    add_out(convexity, csv_help);
    add_sweep(convexity);

    auto* threshold = app.add_subcommand("threshold", "Tag detection thresholds");
    threshold->add_option("--lambdas", a.lambdas, "Noncentrality values")->required()->delimiter(',');
    add_out(threshold, csv_help);

    auto* errors = app.add_subcommand("error-rates", "Analytic error rates, bounds and Monte Carlo");
    add_config(errors);
    add_out(errors, csv_help);
    add_sweep(errors);
    add_mc(errors);
    errors->add_option("--mode", a.mode, "ser_sync, ser_async, ber_sync or ber_async")->capture_default_str();

    auto* mi = app.add_subcommand("mi", "Sum rate and tag mutual information");
    add_config(mi);
    add_out(mi, csv_help);
    add_sweep(mi);
    add_mc(mi);

    auto* figure = app.add_subcommand("figure", "Reproduce a figure data bundle");
    figure->add_option("id", a.figure, "fig4 ... fig11")->required();
    add_out(figure, "Output directory (default: current directory)");
    add_mc(figure);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    try {
        if (region->parsed()) {
            emit(cmd_rate_region(load_base(a), load_sweep(a)), a.out);
        } else if (convexity->parsed()) {
            emit(cmd_convexity(load_base(a), load_sweep(a)), a.out);
        } else if (threshold->parsed()) {
            emit(cmd_threshold(a.lambdas), a.out);
        } else if (errors->parsed()) {
            const ErrorMode mode = parse_error_mode(a.mode);
            emit(cmd_error_rates(load_base(a), mode, load_sweep(a), load_mc(a)), a.out);
        } else if (mi->parsed()) {
            emit(cmd_mi(load_base(a), load_sweep(a), load_mc(a)), a.out);
        } else if (figure->parsed()) {
            emit_bundle(cmd_figure(a.figure, load_mc(a)), a.figure, a.out);
        }
    } catch (const numerical_error& e) {
        std::cerr << "mmac: numerical failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical);
    } catch (const error& e) {
        std::cerr << "mmac: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    } catch (const std::exception& e) {
        std::cerr << "mmac: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    }
    return static_cast<int>(ExitCode::ok);
}
