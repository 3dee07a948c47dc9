#include "mmac_cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "mmac/analytics.hpp"
#include "mmac/error.hpp"
#include "mmac/rate_region.hpp"
#include "mmac/version.hpp"

namespace mmac::cli {

namespace {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

json base_sidecar(const std::string& command, const Scenario* base) {
    json j;
    j["tool"] = "mmac";
    j["version"] = std::string(kVersion);
    j["command"] = command;
    if (base != nullptr) {
        j["config"] = json::parse(scenario_to_json(*base, -1));
    }
    return j;
}

void add_mc(json& j, const McSettings& mc) {
    j["seed"] = mc.seed;
    j["trials"] = mc.trials;
    j["batch_frames"] = kBatchFrames;
}

void add_sweep(json& j, const std::optional<SweepSpec>& sweep) {
    if (sweep) {
        j["sweep"] = {{"variable", sweep->variable_name()}, {"values", sweep->values}};
    }
}

// The swept scenarios, or just the base when there is no sweep.
std::vector<std::pair<Cell, Scenario>> expand(const Scenario& base, const std::optional<SweepSpec>& sweep) {
    std::vector<std::pair<Cell, Scenario>> out;
    if (!sweep) {
        out.emplace_back(std::monostate{}, base);
        return out;
    }
    for (const double v : sweep->values) {
        out.emplace_back(v, sweep->apply(base, v));
    }
    return out;
}

Cell optional_cell(const std::optional<double>& v) {
    if (v) {
        return *v;
    }
    return std::monostate{};
}

json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        return *d;
    }
    if (const auto* s = std::get_if<std::string>(&c)) {
        return *s;
    }
    return nullptr;
}

json point_json(const RatePoint& p) { return {{"R2", p.r2}, {"R1", p.r1}}; }

std::vector<double> grid(double first, double last, double step) {
    std::vector<double> v;
    const auto count = static_cast<int>(std::floor((last - first) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) {
        v.push_back(first + step * i);
    }
    return v;
}

Scenario with_snr_db(Scenario s, double db) {
    s.system.snr = db_to_linear(db);
    return s;
}

// |g|^2 chosen so that |g|^2 rho equals the requested backscatter gain.
Scenario with_backscatter_gain(Scenario s, double g2rho) {
    s.system.channel.magnitude = std::sqrt(g2rho / s.system.rho);
    return s;
}

Scenario with_n(Scenario s, int n) {
    s.system.n = n;
    return s;
}

struct McColumns {
    Cell rate;
    Cell ci;
};

McColumns mc_cells(const ErrorEstimate& e) { return {e.rate, e.ci_halfwidth_95}; }

} // namespace

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? "," : "") + header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            if (const auto* d = std::get_if<double>(&row[i])) {
                out += format_number(*d);
            } else if (const auto* s = std::get_if<std::string>(&row[i])) {
                out += *s;
            }
        }
        out += '\n';
    }
    return out;
}

SweepSpec SweepSpec::parse(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw config_error("sweep must look like VAR=v1,v2,...");
    }
    SweepSpec s;
    const std::string var = lower(text.substr(0, eq));
    if (var == "snr_db") {
        s.variable = SweepVar::snr_db;
    } else if (var == "g_mag2") {
        s.variable = SweepVar::g_mag2;
    } else if (var == "theta") {
        s.variable = SweepVar::theta;
    } else if (var == "alpha") {
        s.variable = SweepVar::alpha;
    } else if (var == "n") {
        s.variable = SweepVar::n;
    } else {
        throw config_error("unknown sweep variable '" + var + "' (snr_db, g_mag2, theta, alpha, n)");
    }
    std::stringstream list(text.substr(eq + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw config_error("sweep value '" + item + "' is not a finite number");
        }
        s.values.push_back(v);
    }
    if (s.values.empty()) {
        throw config_error("sweep needs at least one value");
    }
    return s;
}

std::string SweepSpec::variable_name() const {
    switch (variable) {
    case SweepVar::snr_db: return "snr_db";
    case SweepVar::g_mag2: return "g_mag2";
    case SweepVar::theta: return "theta";
    case SweepVar::alpha: return "alpha";
    case SweepVar::n: return "n";
    }
    return "";
}

Scenario SweepSpec::apply(const Scenario& base, double value) const {
    Scenario s = base;
    switch (variable) {
    case SweepVar::snr_db:
        s.system.snr = db_to_linear(value);
        break;
    case SweepVar::g_mag2:
        if (value < 0.0) {
            throw config_error("sweep g_mag2 values must be nonnegative");
        }
        s.system.channel.magnitude = std::sqrt(value);
        break;
    case SweepVar::theta:
        s.system.channel.phase = wrap_phase(value);
        break;
    case SweepVar::alpha:
        if (value < 0.0 || value > 0.5) {
            throw config_error("sweep alpha values must lie in [0, 0.5]");
        }
        s.alpha = value;
        break;
    case SweepVar::n:
        if (value < 1.0 || value != std::floor(value) || value > 1e6) {
            throw config_error("sweep n values must be positive integers");
        }
        s.system.n = static_cast<int>(value);
        break;
    }
    try {
        s.system.validate();
    } catch (const domain_error& e) {
        throw config_error(e.what());
    }
    return s;
}

ErrorMode parse_error_mode(const std::string& text) {
    const std::string m = lower(text);
    if (m == "ser_sync") return ErrorMode::ser_sync;
    if (m == "ser_async") return ErrorMode::ser_async;
    if (m == "ber_sync") return ErrorMode::ber_sync;
    if (m == "ber_async") return ErrorMode::ber_async;
    throw config_error("unknown mode '" + text + "' (ser_sync, ser_async, ber_sync, ber_async)");
}

std::string to_string(ErrorMode mode) {
    switch (mode) {
    case ErrorMode::ser_sync: return "ser_sync";
    case ErrorMode::ser_async: return "ser_async";
    case ErrorMode::ber_sync: return "ber_sync";
    case ErrorMode::ber_async: return "ber_async";
    }
    return "";
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
    return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index);
}

Scenario detection_scenario() {
    Scenario s;
    s.system.snr = 10.0;
    s.system.rho = 0.5;
    s.system.channel = {std::sqrt(0.2), std::nullopt};
    s.system.n = 1;
    s.system.tag = TagConstellation::on_off();
    s.system.tx_modulation = TxModulation::qpsk;
    return s;
}

CommandOutput cmd_rate_region(const Scenario& base, const std::optional<SweepSpec>& sweep) {
    Table t{{"sweep_value", "label", "R2", "R1"}, {}};
    json polygons = json::array();
    for (const auto& [x, s] : expand(base, sweep)) {
        const RegionVertices v = region_vertices(s.system);
        const char* labels[] = {"o", "B1", "C", "D"};
        const auto poly = v.polygon();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            t.rows.push_back({x, std::string(labels[i]), poly[i].r2, poly[i].r1});
        }
        json p;
        p["sweep_value"] = cell_json(x);
        p["area"] = polygon_area(poly);
        p["degenerate"] = v.degenerate;
        p["vertices"] = {{"o", point_json(v.o)},   {"A1", point_json(v.a1)}, {"B1", point_json(v.b1)},
                         {"A2", point_json(v.a2)}, {"B2", point_json(v.b2)}, {"C", point_json(v.c)},
                         {"D", point_json(v.d)}};
        try {
            const SlopePair sl = convexity_slopes(s.system);
            p["r1"] = sl.r1_slope;
            p["r2"] = sl.r2_slope;
            p["strictly_convex"] = sl.strictly_convex();
        } catch (const degenerate_input_error&) {
            p["r1"] = nullptr;
            p["r2"] = nullptr;
            p["strictly_convex"] = nullptr;
        }
        polygons.push_back(p);
    }
    json side = base_sidecar("rate-region", &base);
    add_sweep(side, sweep);
    side["polygons"] = polygons;
    return {{{"rate_region", t}}, side.dump(2)};
}

CommandOutput cmd_convexity(const Scenario& base, const std::optional<SweepSpec>& sweep) {
    Table t{{"x", "r1_slope", "r2_slope", "strictly_convex", "degenerate"}, {}};
    for (const auto& [x, s] : expand(base, sweep)) {
        const SlopePair sl = convexity_slopes(s.system);
        const bool degenerate = region_vertices(s.system).degenerate;
        t.rows.push_back({x, sl.r1_slope, sl.r2_slope, sl.strictly_convex() ? 1.0 : 0.0, degenerate ? 1.0 : 0.0});
    }
    json side = base_sidecar("convexity", &base);
    add_sweep(side, sweep);
    return {{{"convexity", t}}, side.dump(2)};
}

CommandOutput cmd_threshold(const std::vector<double>& lambdas) {
    if (lambdas.empty()) {
        throw config_error("threshold needs at least one lambda");
    }
    Table t{{"lambda", "threshold_bisection", "threshold_asymptotic", "ratio"}, {}};
    for (const double l : lambdas) {
        const double b = threshold_lambda(l, ThresholdMethod::bisection).threshold;
        const double a = threshold_lambda(l, ThresholdMethod::asymptotic).threshold;
        t.rows.push_back({l, b, a, b / a});
    }
    json side = base_sidecar("threshold", nullptr);
    side["lambdas"] = lambdas;
    return {{{"threshold", t}}, side.dump(2)};
}

CommandOutput cmd_error_rates(const Scenario& base, ErrorMode mode, const std::optional<SweepSpec>& sweep,
                              const McSettings& mc) {
    Table t{{"x", "analytic", "lower_bound", "upper_bound", "mc_rate", "mc_ci"}, {}};
    const auto points = expand(base, sweep);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [x, s] = points[i];
        const SystemConfig& c = s.system;
        const double alpha = (mode == ErrorMode::ser_sync || mode == ErrorMode::ber_sync) ? 0.0 : s.alpha;
        std::optional<double> analytic;
        std::optional<BoundPair> bounds;
        switch (mode) {
        case ErrorMode::ser_sync:
            analytic = ser_x1_sync(c);
            bounds = ser_x1_bounds_sync(c);
            break;
        case ErrorMode::ser_async:
            analytic = ser_x1_async(c, alpha);
            bounds = ser_x1_async_asymptotic_bounds(c);
            break;
        case ErrorMode::ber_sync:
            bounds = ber_x2_bounds_sync(c);
            break;
        case ErrorMode::ber_async:
            if (c.snr >= kAsyncBerMinSnr) {
                bounds = ber_x2_bounds_async(c, alpha);
            }
            break;
        }
        McColumns m{};
        if (mc.trials > 0) {
            const std::uint64_t seed = point_seed(mc.seed, i);
            const bool ser = mode == ErrorMode::ser_sync || mode == ErrorMode::ser_async;
            m = mc_cells(ser ? run_ser_x1(c, alpha, mc.trials, seed, mc.run)
                             : run_ber_x2(c, alpha, TagStrategy::full, mc.trials, seed, mc.run));
        }
        t.rows.push_back({x, optional_cell(analytic),
                          bounds ? Cell{bounds->lower} : Cell{}, bounds ? Cell{bounds->upper} : Cell{}, m.rate, m.ci});
    }
    json side = base_sidecar("error-rates", &base);
    side["mode"] = to_string(mode);
    add_sweep(side, sweep);
    add_mc(side, mc);
    return {{{"error_rates", t}}, side.dump(2)};
}

CommandOutput cmd_mi(const Scenario& base, const std::optional<SweepSpec>& sweep, const McSettings& mc) {
    Table t{{"x", "sum_rate_exact", "sum_rate_lower", "sum_rate_mc", "sum_rate_mc_se", "tag_mi_exact",
             "tag_mi_lower", "tag_mi_upper", "tag_mi_mc", "tag_mi_mc_se"},
            {}};
    const auto points = expand(base, sweep);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [x, s] = points[i];
        const SystemConfig& c = s.system;
        std::vector<Cell> row{x, sum_rate_exact(c), sum_rate_lower_bound(c), {}, {}, rate_tag_given_tx(c),
                              rate_tag_lower_bound(c), tdma_rates(c).r2_upper, {}, {}};
        if (mc.trials > 0) {
            const MiEstimate e = run_mi_estimates(c, std::max<std::uint64_t>(mc.trials, 10000), point_seed(mc.seed, i), mc.run);
            row[3] = e.sum_rate;
            row[4] = e.sum_rate_se;
            row[8] = e.tag_mi;
            row[9] = e.tag_mi_se;
        }
        t.rows.push_back(std::move(row));
    }
    json side = base_sidecar("mi", &base);
    add_sweep(side, sweep);
    add_mc(side, mc);
    return {{{"mi", t}}, side.dump(2)};
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
    return ids;
}

CommandOutput cmd_figure(const std::string& id, const McSettings& mc) {
    if (std::find(figure_ids().begin(), figure_ids().end(), id) == figure_ids().end()) {
        throw config_error("unknown figure id '" + id + "'");
    }
    json side = base_sidecar("figure", nullptr);
    side["figure"] = id;
    CommandOutput out;

    if (id == "fig4") {
        // Rate regions at the reference scenario, swept over |g|^2, theta and SNR.
        const Scenario base = default_scenario();
        const std::pair<const char*, SweepSpec> sweeps[] = {
            {"fig4", {SweepVar::g_mag2, {0.01, 0.1, 1.0}}},
            {"fig4_theta", {SweepVar::theta, {0.0, std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4}}},
            {"fig4_snr", {SweepVar::snr_db, {0.0, 10.0, 20.0, 30.0}}},
        };
        json parts = json::object();
        for (const auto& [name, sweep] : sweeps) {
            CommandOutput r = cmd_rate_region(base, sweep);
            out.tables.push_back({name, r.tables.front().table});
            parts[name] = json::parse(r.sidecar)["polygons"];
        }
        side["config"] = json::parse(scenario_to_json(base, -1));
        side["polygons"] = parts;
    } else if (id == "fig5") {
        // Tag BER versus SNR for three (N, |g|^2 rho) panels.
        add_mc(side, mc);
        Table t{{"panel", "n", "g2rho", "snr_db", "lower_bound", "upper_bound", "asymptotic", "mc_rate", "mc_ci"}, {}};
        const std::pair<int, double> panels[] = {{2, 0.1}, {4, 0.1}, {4, 0.05}};
        std::size_t k = 0;
        for (std::size_t p = 0; p < 3; ++p) {
            for (const double db : grid(0.0, 30.0, 2.0)) {
                const Scenario s = with_snr_db(with_n(with_backscatter_gain(detection_scenario(), panels[p].second),
                                                      panels[p].first), db);
                const BoundPair b = ber_x2_bounds_sync(s.system);
                McColumns m{};
                if (mc.trials > 0) {
                    m = mc_cells(run_ber_x2(s.system, 0.0, TagStrategy::full, mc.trials, point_seed(mc.seed, k), mc.run));
                }
                ++k;
                t.rows.push_back({std::string(1, static_cast<char>('a' + p)), static_cast<double>(panels[p].first),
                                  panels[p].second, db, b.lower, b.upper, ber_x2_asymptotic(s.system), m.rate, m.ci});
            }
        }
        out.tables.push_back({"fig5", t});
    } else if (id == "fig6") {
        // Central and noncentral chi^2(2) densities and their crossings.
        const double lambdas[] = {1.0, 10.0, 20.0};
        Table pdf{{"x", "chi2", "ncchi2_lambda1", "ncchi2_lambda10", "ncchi2_lambda20"}, {}};
        for (const double x : grid(0.0, 30.0, 0.1)) {
            std::vector<Cell> row{x, numerics::chi2_pdf_2dof(x)};
            for (const double l : lambdas) {
                row.emplace_back(numerics::nc_chi2_pdf_2dof(x, l));
            }
            pdf.rows.push_back(std::move(row));
        }
        out.tables.push_back({"fig6", pdf});
        out.tables.push_back({"fig6_thresholds", cmd_threshold({1.0, 10.0, 20.0}).tables.front().table});
    } else if (id == "fig7") {
        std::vector<double> lambdas;
        for (int l = 1; l <= 100; ++l) {
            lambdas.push_back(l);
        }
        out.tables.push_back({"fig7", cmd_threshold(lambdas).tables.front().table});
    } else if (id == "fig8") {
        // Tx SER versus SNR.
        add_mc(side, mc);
        Table t{{"g2rho", "snr_db", "analytic", "lower_bound", "upper_bound", "asymptotic_lower", "asymptotic_upper",
                 "mc_rate", "mc_ci"},
                {}};
        std::size_t k = 0;
        for (const double g2rho : {0.1, 0.01}) {
            for (const double db : grid(0.0, 25.0, 1.0)) {
                const Scenario s = with_snr_db(with_backscatter_gain(detection_scenario(), g2rho), db);
                const BoundPair b = ser_x1_bounds_sync(s.system);
                const BoundPair a = ser_x1_asymptotic_bounds(s.system);
                McColumns m{};
                if (mc.trials > 0) {
                    m = mc_cells(run_ser_x1(s.system, 0.0, mc.trials, point_seed(mc.seed, k), mc.run));
                }
                ++k;
                t.rows.push_back({g2rho, db, ser_x1_sync(s.system), b.lower, b.upper, a.lower, a.upper, m.rate, m.ci});
            }
        }
        out.tables.push_back({"fig8", t});
    } else if (id == "fig9") {
        // Tx SER versus delay offset ratio, SNR 10 dB, |g|^2 rho = 0.1.
        add_mc(side, mc);
        Table t{{"n", "alpha", "analytic", "asymptotic_lower", "asymptotic_upper", "mc_rate", "mc_ci"}, {}};
        std::size_t k = 0;
        for (const int n : {2, 4, 6}) {
            const Scenario s = with_n(detection_scenario(), n);
            const BoundPair a = ser_x1_async_asymptotic_bounds(s.system);
            for (const double alpha : grid(0.0, 0.5, 0.05)) {
                McColumns m{};
                if (mc.trials > 0) {
                    m = mc_cells(run_ser_x1(s.system, alpha, mc.trials, point_seed(mc.seed, k), mc.run));
                }
                ++k;
                t.rows.push_back({static_cast<double>(n), alpha, ser_x1_async(s.system, alpha), a.lower, a.upper, m.rate, m.ci});
            }
        }
        out.tables.push_back({"fig9", t});
    } else if (id == "fig10") {
        // Tag BER versus delay offset ratio, SNR 20 dB, |g|^2 rho = 0.1.
        add_mc(side, mc);
        Table t{{"n", "alpha", "lower_bound", "upper_bound", "mc_full", "mc_full_ci", "mc_truncated", "mc_truncated_ci"},
                {}};
        std::size_t k = 0;
        for (const int n : {2, 3}) {
            const Scenario s = with_snr_db(with_n(detection_scenario(), n), 20.0);
            for (const double alpha : grid(0.0, 0.5, 0.05)) {
                const BoundPair b = ber_x2_bounds_async(s.system, alpha);
                McColumns full{};
                McColumns trunc{};
                if (mc.trials > 0) {
                    // The bounds assume lambda / 4 at every alpha, including 0.
                    RunOptions full_run = mc.run;
                    full_run.threshold = mc.run.threshold.value_or(ThresholdMethod::asymptotic);
                    full = mc_cells(run_ber_x2(s.system, alpha, TagStrategy::full, mc.trials, point_seed(mc.seed, k), full_run));
                    trunc = mc_cells(
                        run_ber_x2(s.system, alpha, TagStrategy::truncated, mc.trials, point_seed(mc.seed, k), mc.run));
                }
                ++k;
                t.rows.push_back({static_cast<double>(n), alpha, b.lower, b.upper, full.rate, full.ci, trunc.rate, trunc.ci});
            }
        }
        out.tables.push_back({"fig10", t});
    } else {
        // fig11: per-sample tag coefficient of one asynchronous frame, N = 3.
        Table t{{"alpha", "prev_bit", "bit", "sample", "coefficient_re", "coefficient_im"}, {}};
        Scenario s = with_n(detection_scenario(), 3);
        s.system.channel.phase = 0.0;
        s.system.channel.magnitude = 1.0;
        s.system.rho = 1.0;
        s.system.snr = 1.0;
        const std::vector<cplx> ones(3, cplx{1.0, 0.0});
        const std::vector<cplx> zeros(3, cplx{0.0, 0.0});
        for (const double alpha : {0.0, 0.3}) {
            for (const int prev : {0, 1}) {
                for (const int bit : {0, 1}) {
                    // With x = 1, g = 1, SNR = 1 and no noise, y_i - 1 is the tag coefficient.
                    const ReceivedFrame f = synthesize_frame(s.system, ones, bit == 1, prev == 1, alpha, zeros, 0.0);
                    for (std::size_t i = 0; i < f.samples.size(); ++i) {
                        const cplx m = f.samples[i] - 1.0;
                        t.rows.push_back({alpha, static_cast<double>(prev), static_cast<double>(bit),
                                          static_cast<double>(i + 1), m.real(), m.imag()});
                    }
                }
            }
        }
        out.tables.push_back({"fig11", t});
    }
    if (!side.contains("config") && id != "fig6" && id != "fig7") {
        side["config"] = json::parse(scenario_to_json(detection_scenario(), -1));
    }
    out.sidecar = side.dump(2);
    return out;
}

} // namespace mmac::cli
