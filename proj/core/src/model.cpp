#include "mmac/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mmac/error.hpp"

namespace mmac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

double SystemConfig::amplitude_gain() const { return channel.magnitude * std::sqrt(rho); }

cplx SystemConfig::complex_gain() const {
    if (channel.random_phase()) {
        throw domain_error("complex_gain: channel phase is random; a fixed phase is required");
    }
    return std::polar(amplitude_gain(), *channel.phase);
}

void SystemConfig::validate() const {
    if (!(snr > 0.0) || !std::isfinite(snr)) {
        throw domain_error("SystemConfig: snr must be positive and finite");
    }
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw domain_error("SystemConfig: rho must lie in [0, 1]");
    }
    if (n < 1) {
        throw domain_error("SystemConfig: n must be >= 1");
    }
    if (!(channel.magnitude >= 0.0) || !std::isfinite(channel.magnitude)) {
        throw domain_error("SystemConfig: |g| must be nonnegative and finite");
    }
    if (channel.phase && !std::isfinite(*channel.phase)) {
        throw domain_error("SystemConfig: channel phase must be finite");
    }
    constexpr double slack = 1e-12;
    if (!(std::abs(tag.c1) <= 1.0 + slack) || !(std::abs(tag.c0) <= 1.0 + slack)) {
        throw domain_error("SystemConfig: tag reflection amplitudes must satisfy |c| <= 1");
    }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double wrap_phase(double theta) {
    if (!std::isfinite(theta)) {
        throw domain_error("wrap_phase: non-finite angle");
    }
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    return w >= kTwoPi ? 0.0 : w;
}

ReceivedFrame synthesize_frame(const SystemConfig& cfg, std::span<const cplx> tx, bool bit, bool prev_bit,
                               double alpha, std::span<const cplx> noise, double theta) {
    const auto n = static_cast<std::size_t>(cfg.n);
    if (tx.size() != n || noise.size() != n) {
        throw shape_error("synthesize_frame: expected " + std::to_string(n) + " Tx symbols and noise draws");
    }
    if (!(alpha >= 0.0 && alpha <= 0.5)) {
        throw domain_error("synthesize_frame: alpha must lie in [0, 0.5]");
    }
    theta = wrap_phase(theta);
    const double amp = std::sqrt(cfg.snr);
    const cplx gain = std::polar(cfg.amplitude_gain(), theta);
    const cplx current = cfg.tag.symbol(bit);
    // alpha == 0 must ignore prev_bit bit-for-bit, so the blend is skipped.
    const cplx boundary = alpha == 0.0 ? current : alpha * cfg.tag.symbol(prev_bit) + (1.0 - alpha) * current;

    ReceivedFrame frame;
    frame.samples.resize(n);
    frame.tx_truth.assign(tx.begin(), tx.end());
    frame.tag_truth_current = bit;
    frame.tag_truth_previous = prev_bit;
    frame.alpha = alpha;
    frame.theta_realization = theta;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx m = i == 0 ? boundary : current;
        frame.samples[i] = amp * tx[i] * (1.0 + gain * m) + noise[i];
    }
    return frame;
}

const std::array<cplx, 4>& qpsk_alphabet() {
    static const std::array<cplx, 4> points = [] {
        const double s = std::numbers::sqrt2 * 0.5;
        return std::array<cplx, 4>{cplx{s, s}, cplx{-s, s}, cplx{-s, -s}, cplx{s, -s}};
    }();
    return points;
}

std::vector<cplx> draw_tx_symbols(const SystemConfig& cfg, RngStream& rng) {
    std::vector<cplx> out(static_cast<std::size_t>(cfg.n));
    if (cfg.tx_modulation == TxModulation::gaussian) {
        for (auto& x : out) {
            x = rng.complex_normal();
        }
        return out;
    }
    const auto& alphabet = qpsk_alphabet();
    for (auto& x : out) {
        x = alphabet[rng() >> 30];
    }
    return out;
}

bool draw_tag_bit(RngStream& rng) { return (rng() >> 31) != 0U; }

double draw_theta(RngStream& rng) { return kTwoPi * rng.uniform(); }

std::vector<cplx> draw_noise(int n, RngStream& rng) {
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (auto& z : out) {
        z = rng.complex_normal();
    }
    return out;
}

double channel_phase(const SystemConfig& cfg, RngStream& rng) {
    return cfg.channel.random_phase() ? draw_theta(rng) : *cfg.channel.phase;
}

} // namespace mmac
