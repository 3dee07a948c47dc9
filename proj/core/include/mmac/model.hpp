#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "mmac/random.hpp"

namespace mmac {

using cplx = std::complex<double>;

enum class TxModulation { qpsk, gaussian };

/// Tag reflection states {c1, c0}. |c1|, |c0| <= 1.
struct TagConstellation {
    cplx c1{1.0, 0.0};
    cplx c0{0.0, 0.0};

    static TagConstellation on_off() { return {{1.0, 0.0}, {0.0, 0.0}}; }
    static TagConstellation bpsk() { return {{1.0, 0.0}, {-1.0, 0.0}}; }

    cplx symbol(bool bit) const { return bit ? c1 : c0; }
    double separation() const { return std::abs(c1 - c0); }
};

/// Relative backscatter channel g = |g| e^{j theta}. An empty phase means
/// the phase is uniform on [0, 2 pi) and redrawn for every tag symbol.
struct RelativeChannel {
    double magnitude = 0.0;
    std::optional<double> phase = 0.0;

    bool random_phase() const { return !phase.has_value(); }
};

struct SystemConfig {
    double snr = 10.0;  // linear
    double rho = 0.5;
    RelativeChannel channel{};
    int n = 1;
    TagConstellation tag = TagConstellation::on_off();
    TxModulation tx_modulation = TxModulation::qpsk;

    /// |g|^2 rho
    double backscatter_gain() const { return channel.magnitude * channel.magnitude * rho; }
    /// |g| sqrt(rho)
    double amplitude_gain() const;
    /// g sqrt(rho) at the fixed phase; throws domain_error for a random phase.
    cplx complex_gain() const;

    /// Throws domain_error unless snr > 0, rho in [0,1], n >= 1, |g| >= 0,
    /// phase finite, |c1|, |c0| <= 1.
    void validate() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Wraps any finite angle into [0, 2 pi).
double wrap_phase(double theta);

struct ReceivedFrame {
    std::vector<cplx> samples;
    std::vector<cplx> tx_truth;
    bool tag_truth_current = false;
    bool tag_truth_previous = false;
    double alpha = 0.0;
    double theta_realization = 0.0;
};

/// y_i = sqrt(SNR) x_i (1 + |g| e^{j theta} sqrt(rho) m_i) + z_i, where m_i is
/// the tag value of the current bit except at the first sample, where
/// m_0 = alpha c(prev) + (1 - alpha) c(bit).
/// Throws shape_error when tx or noise length differs from cfg.n and
/// domain_error for alpha outside [0, 0.5].
ReceivedFrame synthesize_frame(const SystemConfig& cfg, std::span<const cplx> tx, bool bit, bool prev_bit,
                               double alpha, std::span<const cplx> noise, double theta);

/// {(+-1 +-j)/sqrt 2}, ordered by quadrant 1..4.
const std::array<cplx, 4>& qpsk_alphabet();

/// n i.i.d. Tx symbols: uniform QPSK or CN(0,1) per cfg.tx_modulation.
std::vector<cplx> draw_tx_symbols(const SystemConfig& cfg, RngStream& rng);
bool draw_tag_bit(RngStream& rng);
double draw_theta(RngStream& rng);
std::vector<cplx> draw_noise(int n, RngStream& rng);

/// Fixed channel phase, or a fresh uniform draw when the phase is random.
double channel_phase(const SystemConfig& cfg, RngStream& rng);

} // namespace mmac
