#pragma once

#include <span>
#include <vector>

#include "mmac/analytics.hpp"
#include "mmac/model.hpp"

namespace mmac {

struct DetectionResult {
    std::vector<cplx> tx_estimates;
    bool tag_estimate = false;
    double test_statistic = 0.0;  // 2 |Y~|^2
    double threshold_used = 0.0;
};

/// Per-sample QPSK quadrant decisions. A zero coordinate decides positive.
/// Throws unsupported_error for Gaussian Tx mode.
std::vector<cplx> detect_tx(const ReceivedFrame& frame, const SystemConfig& cfg);

/// Cancels sqrt(SNR) x^ from every sample from `first` on and combines with
/// weights conj(x^_i) / |x^| over the same samples.
/// Throws shape_error on length mismatch and degenerate_input_error when
/// the combined estimates have zero norm.
cplx cancel_and_mrc(const ReceivedFrame& frame, std::span<const cplx> tx_estimates, const SystemConfig& cfg,
                    std::size_t first = 0);

/// 1 iff 2 |y_tilde|^2 >= threshold. Throws domain_error for threshold <= 0.
bool detect_tag(cplx y_tilde, double threshold);

/// Tag decision from samples 2..N only, with the threshold for
/// lambda_truncated. Throws unsupported_error for N = 1.
bool detect_tag_truncated(const ReceivedFrame& frame, std::span<const cplx> tx_estimates, const SystemConfig& cfg);
bool detect_tag_truncated(const ReceivedFrame& frame, std::span<const cplx> tx_estimates, const SystemConfig& cfg,
                          double threshold);

/// Full two-step receiver with a precomputed threshold.
DetectionResult detect_joint(const ReceivedFrame& frame, const SystemConfig& cfg, double threshold);
/// Two-step receiver that discards the first sample for the tag decision.
DetectionResult detect_joint_truncated(const ReceivedFrame& frame, const SystemConfig& cfg, double threshold);

struct MlDecision {
    std::vector<cplx> tx_estimates;
    bool tag_estimate = false;
    double log_likelihood = 0.0;  // up to a hypothesis-independent constant
};

inline constexpr int kMlMaxN = 4;
inline constexpr int kMlPhasePoints = 256;

/// Exhaustive joint ML over QPSK^N x {c0, c1} with the channel phase
/// marginalized (uniform) by periodic quadrature. Synchronous model.
/// Throws unsupported_error for N > kMlMaxN or Gaussian Tx mode.
MlDecision ml_joint_oracle(const ReceivedFrame& frame, const SystemConfig& cfg);

/// ln (1/2pi) integral of exp(2 Re(c e^{-j phi})) d phi by the same
/// quadrature used in ml_joint_oracle. Equals ln I0(2 |c|).
double log_phase_marginal(cplx c);

} // namespace mmac
