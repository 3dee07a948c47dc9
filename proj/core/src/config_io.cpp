#include "mmac/config_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mmac/error.hpp"

namespace mmac {

namespace {

using nlohmann::json;

const std::set<std::string>& known_fields() {
    static const std::set<std::string> fields{"snr_db", "rho", "g_mag2", "theta", "n", "alpha", "tag", "tx_modulation"};
    return fields;
}

const json& require(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw config_error(std::string("missing required field '") + key + "'");
    }
    return *it;
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) {
        throw config_error("field '" + key + "' must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw config_error("field '" + key + "' must be finite");
    }
    return x;
}

cplx as_complex(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw config_error("field '" + key + "' must be a [re, im] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw config_error("scenario must be a JSON object");
    }
    for (const auto& item : doc.items()) {
        if (known_fields().count(item.key()) == 0) {
            throw config_error("unknown field '" + item.key() + "'");
        }
    }

    Scenario s;
    SystemConfig& c = s.system;
    c.snr = db_to_linear(as_number(require(doc, "snr_db"), "snr_db"));
    c.rho = as_number(require(doc, "rho"), "rho");
    const double g_mag2 = as_number(require(doc, "g_mag2"), "g_mag2");
    if (g_mag2 < 0.0) {
        throw config_error("field 'g_mag2' must be nonnegative");
    }
    c.channel.magnitude = std::sqrt(g_mag2);

    const json& theta = require(doc, "theta");
    if (theta.is_string()) {
        if (theta.get<std::string>() != "uniform") {
            throw config_error("field 'theta' must be a number or \"uniform\"");
        }
        c.channel.phase.reset();
    } else {
        c.channel.phase = wrap_phase(as_number(theta, "theta"));
    }

    const json& n = require(doc, "n");
    if (!n.is_number_integer()) {
        throw config_error("field 'n' must be an integer");
    }
    c.n = n.get<int>();

    const json& tag = require(doc, "tag");
    if (!tag.is_object() || tag.size() != 2 || !tag.contains("c1") || !tag.contains("c0")) {
        throw config_error("field 'tag' must be an object with exactly c1 and c0");
    }
    c.tag.c1 = as_complex(tag["c1"], "tag.c1");
    c.tag.c0 = as_complex(tag["c0"], "tag.c0");

    if (const auto it = doc.find("tx_modulation"); it != doc.end()) {
        const std::string mod = it->is_string() ? it->get<std::string>() : "";
        if (mod == "qpsk") {
            c.tx_modulation = TxModulation::qpsk;
        } else if (mod == "gaussian") {
            c.tx_modulation = TxModulation::gaussian;
        } else {
            throw config_error("field 'tx_modulation' must be \"qpsk\" or \"gaussian\"");
        }
    }
    if (const auto it = doc.find("alpha"); it != doc.end()) {
        s.alpha = as_number(*it, "alpha");
        if (s.alpha < 0.0 || s.alpha > 0.5) {
            throw config_error("field 'alpha' must lie in [0, 0.5]");
        }
    }

    try {
        c.validate();
    } catch (const domain_error& e) {
        throw config_error(e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& scenario, int indent) {
    const SystemConfig& c = scenario.system;
    json doc = json::object();
    doc["snr_db"] = linear_to_db(c.snr);
    doc["rho"] = c.rho;
    doc["g_mag2"] = c.channel.magnitude * c.channel.magnitude;
    if (c.channel.random_phase()) {
        doc["theta"] = "uniform";
    } else {
        doc["theta"] = *c.channel.phase;
    }
    doc["n"] = c.n;
    doc["alpha"] = scenario.alpha;
    doc["tag"] = {{"c1", {c.tag.c1.real(), c.tag.c1.imag()}}, {"c0", {c.tag.c0.real(), c.tag.c0.imag()}}};
    doc["tx_modulation"] = c.tx_modulation == TxModulation::qpsk ? "qpsk" : "gaussian";
    return doc.dump(indent);
}

Scenario default_scenario() {
    Scenario s;
    s.system.snr = 10.0;
    s.system.rho = 0.5;
    s.system.channel = {std::sqrt(0.1), std::numbers::pi / 4.0};
    s.system.n = 1;
    s.system.tag = TagConstellation::bpsk();
    s.system.tx_modulation = TxModulation::qpsk;
    return s;
}

} // namespace mmac
