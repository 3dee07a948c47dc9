#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"
#include "mmac/config_io.hpp"
#include "mmac/error.hpp"

using namespace mmac;

namespace {

const char* kValid = R"({
  "snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0.7853981633974483, "n": 2,
  "tag": {"c1": [1, 0], "c0": [-1, 0]}, "alpha": 0.25, "tx_modulation": "qpsk"
})";

} // namespace

TEST_CASE("parse a complete scenario") {
    const Scenario s = parse_scenario(kValid);
    CHECK(s.system.snr == doctest::Approx(10.0));
    CHECK(s.system.rho == 0.5);
    CHECK(s.system.channel.magnitude == doctest::Approx(std::sqrt(0.1)));
    REQUIRE(s.system.channel.phase.has_value());
    CHECK(*s.system.channel.phase == doctest::Approx(std::numbers::pi / 4));
    CHECK(s.system.n == 2);
    CHECK(s.system.tag.c0 == cplx(-1.0, 0.0));
    CHECK(s.alpha == 0.25);
    CHECK(s.system.tx_modulation == TxModulation::qpsk);
}

TEST_CASE("optional fields take defaults") {
    const Scenario s = parse_scenario(
        R"({"snr_db": 0, "rho": 1, "g_mag2": 0.2, "theta": "uniform", "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}})");
    CHECK(s.alpha == 0.0);
    CHECK(s.system.tx_modulation == TxModulation::qpsk);
    CHECK(s.system.channel.random_phase());
    CHECK(s.system.snr == doctest::Approx(1.0));
}

TEST_CASE("round trip through scenario_to_json") {
    const Scenario a = parse_scenario(kValid);
    const Scenario b = parse_scenario(scenario_to_json(a));
    CHECK(b.system.snr == doctest::Approx(a.system.snr).epsilon(1e-14));
    CHECK(b.system.channel.magnitude == doctest::Approx(a.system.channel.magnitude).epsilon(1e-14));
    CHECK(*b.system.channel.phase == doctest::Approx(*a.system.channel.phase).epsilon(1e-14));
    CHECK(b.system.n == a.system.n);
    CHECK(b.system.tag.c1 == a.system.tag.c1);
    CHECK(b.system.tag.c0 == a.system.tag.c0);
    CHECK(b.alpha == a.alpha);
    CHECK(scenario_to_json(b) == scenario_to_json(a));

    const Scenario d = default_scenario();
    CHECK(parse_scenario(scenario_to_json(d)).system.channel.magnitude == doctest::Approx(d.system.channel.magnitude));
}

TEST_CASE("reference scenario") {
    const Scenario d = default_scenario();
    CHECK(d.system.snr == doctest::Approx(10.0));
    CHECK(d.system.rho == 0.5);
    CHECK(d.system.channel.magnitude * d.system.channel.magnitude == doctest::Approx(0.1));
    CHECK(*d.system.channel.phase == doctest::Approx(std::numbers::pi / 4));
    CHECK(d.system.tag.c0 == cplx(-1.0, 0.0));
    CHECK(d.system.n == 1);
}

TEST_CASE("malformed scenarios are rejected") {
    const char* bad[] = {
        "not json",
        "[1, 2]",
        R"({"rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}, "extra": 1})",
        R"({"snr_db": "10", "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 1.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": -0.1, "theta": 0, "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": "random", "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1.5, "tag": {"c1": [1, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 0, "tag": {"c1": [1, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [2, 0], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [1], "c0": [0, 0]}})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}, "alpha": 0.7})",
        R"({"snr_db": 10, "rho": 0.5, "g_mag2": 0.1, "theta": 0, "n": 1, "tag": {"c1": [1, 0], "c0": [0, 0]}, "tx_modulation": "bpsk"})",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_scenario(text), config_error);
    }
}

TEST_CASE("load_scenario from disk") {
    const auto path = std::filesystem::temp_directory_path() / "mmac_config_io_test.json";
    {
        std::ofstream f(path);
        f << kValid;
    }
    CHECK(load_scenario(path).system.n == 2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_scenario(path), config_error);
}
