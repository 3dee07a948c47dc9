#include "mmac/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mmac/error.hpp"

namespace mmac {

namespace {

void require_qpsk(const SystemConfig& cfg, const char* who) {
    if (cfg.tx_modulation != TxModulation::qpsk) {
        throw unsupported_error(std::string(who) + ": requires QPSK Tx modulation");
    }
}

void require_length(std::size_t got, const SystemConfig& cfg, const char* who) {
    if (got != static_cast<std::size_t>(cfg.n)) {
        throw shape_error(std::string(who) + ": expected " + std::to_string(cfg.n) + " entries");
    }
}

cplx quadrant_decision(cplx y) {
    const double s = 0.5 * std::numbers::sqrt2;
    return {y.real() >= 0.0 ? s : -s, y.imag() >= 0.0 ? s : -s};
}

const std::array<double, kMlPhasePoints>& phase_cosines() {
    static const std::array<double, kMlPhasePoints> table = [] {
        std::array<double, kMlPhasePoints> t{};
        for (int k = 0; k < kMlPhasePoints; ++k) {
            t[static_cast<std::size_t>(k)] = std::cos(2.0 * std::numbers::pi * k / kMlPhasePoints);
        }
        return t;
    }();
    return table;
}

} // namespace

std::vector<cplx> detect_tx(const ReceivedFrame& frame, const SystemConfig& cfg) {
    require_qpsk(cfg, "detect_tx");
    require_length(frame.samples.size(), cfg, "detect_tx");
    std::vector<cplx> out(frame.samples.size());
    std::transform(frame.samples.begin(), frame.samples.end(), out.begin(), quadrant_decision);
    return out;
}

cplx cancel_and_mrc(const ReceivedFrame& frame, std::span<const cplx> tx_estimates, const SystemConfig& cfg,
                    std::size_t first) {
    require_length(frame.samples.size(), cfg, "cancel_and_mrc");
    require_length(tx_estimates.size(), cfg, "cancel_and_mrc");
    const double amp = std::sqrt(cfg.snr);
    cplx acc{0.0, 0.0};
    double energy = 0.0;
    for (std::size_t i = first; i < tx_estimates.size(); ++i) {
        const cplx x = tx_estimates[i];
        acc += std::conj(x) * (frame.samples[i] - amp * x);
        energy += std::norm(x);
    }
    if (!(energy > 0.0)) {
        throw degenerate_input_error("cancel_and_mrc: Tx estimates have zero norm");
    }
    return acc / std::sqrt(energy);
}

bool detect_tag(cplx y_tilde, double threshold) {
    if (!(threshold > 0.0)) {
        throw domain_error("detect_tag: threshold must be positive");
    }
    return 2.0 * std::norm(y_tilde) >= threshold;
}

bool detect_tag_truncated(const ReceivedFrame& frame, std::span<const cplx> tx_estimates, const SystemConfig& cfg) {
    return detect_tag_truncated(frame, tx_estimates, cfg, threshold_lambda(lambda_truncated(cfg)).threshold);
}

bool detect_tag_truncated(const ReceivedFrame& frame, std::span<const cplx> tx_estimates, const SystemConfig& cfg,
                          double threshold) {
    if (cfg.n < 2) {
        throw unsupported_error("detect_tag_truncated: requires N >= 2");
    }
    return detect_tag(cancel_and_mrc(frame, tx_estimates, cfg, 1), threshold);
}

DetectionResult detect_joint(const ReceivedFrame& frame, const SystemConfig& cfg, double threshold) {
    DetectionResult r;
    r.tx_estimates = detect_tx(frame, cfg);
    const cplx y_tilde = cancel_and_mrc(frame, r.tx_estimates, cfg);
    r.test_statistic = 2.0 * std::norm(y_tilde);
    r.tag_estimate = detect_tag(y_tilde, threshold);
    r.threshold_used = threshold;
    return r;
}

DetectionResult detect_joint_truncated(const ReceivedFrame& frame, const SystemConfig& cfg, double threshold) {
    if (cfg.n < 2) {
        throw unsupported_error("detect_joint_truncated: requires N >= 2");
    }
    DetectionResult r;
    r.tx_estimates = detect_tx(frame, cfg);
    const cplx y_tilde = cancel_and_mrc(frame, r.tx_estimates, cfg, 1);
    r.test_statistic = 2.0 * std::norm(y_tilde);
    r.tag_estimate = detect_tag(y_tilde, threshold);
    r.threshold_used = threshold;
    return r;
}

double log_phase_marginal(cplx c) {
    // Periodic trapezoid of exp(2 |c| cos phi); the phase of c drops out.
    const double k = 2.0 * std::abs(c);
    if (k == 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (const double cs : phase_cosines()) {
        sum += std::exp(k * (cs - 1.0));
    }
    return k + std::log(sum / kMlPhasePoints);
}

MlDecision ml_joint_oracle(const ReceivedFrame& frame, const SystemConfig& cfg) {
    require_qpsk(cfg, "ml_joint_oracle");
    if (cfg.n > kMlMaxN) {
        throw unsupported_error("ml_joint_oracle: N exceeds " + std::to_string(kMlMaxN));
    }
    require_length(frame.samples.size(), cfg, "ml_joint_oracle");

    const auto n = static_cast<std::size_t>(cfg.n);
    const double amp = std::sqrt(cfg.snr);
    const double gain = cfg.amplitude_gain();
    const auto& alphabet = qpsk_alphabet();
    const std::size_t hypotheses = std::size_t{1} << (2 * n);

    MlDecision best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    std::vector<cplx> x(n);
    for (int bit = 0; bit <= 1; ++bit) {
        const cplx scatter = gain * cfg.tag.symbol(bit == 1);
        for (std::size_t h = 0; h < hypotheses; ++h) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = alphabet[(h >> (2 * i)) & 3U];
            }
            // log p(y | x, bit) = -sum |r_i|^2 - sum |B_i|^2 + ln E_phi exp(2 Re(C e^{-j phi}))
            double residual = 0.0;
            double scatter_energy = 0.0;
            cplx corr{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                const cplx r = frame.samples[i] - amp * x[i];
                const cplx b = amp * x[i] * scatter;
                residual += std::norm(r);
                scatter_energy += std::norm(b);
                corr += std::conj(b) * r;
            }
            const double ll = -residual - scatter_energy + log_phase_marginal(corr);
            if (ll > best.log_likelihood) {
                best.log_likelihood = ll;
                best.tx_estimates = x;
                best.tag_estimate = bit == 1;
            }
        }
    }
    return best;
}

} // namespace mmac
