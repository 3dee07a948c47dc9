#pragma once

#include <cstdint>
#include <optional>

#include "mmac/analytics.hpp"
#include "mmac/model.hpp"

// Monte Carlo estimates. Work is split into batches of kBatchFrames frames;
// batch b draws only from RngStream(seed, b) and per-batch counts are summed
// in batch order, so results depend on (inputs, seed) and not on the number
// of worker threads.

namespace mmac {

inline constexpr std::uint64_t kBatchFrames = std::uint64_t{1} << 14;

struct ErrorEstimate {
    double rate = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double ci_halfwidth_95 = 0.0;  // 1.96 sqrt(rate (1 - rate) / trials)
    std::uint64_t seed = 0;

    static ErrorEstimate from_counts(std::uint64_t errors, std::uint64_t trials, std::uint64_t seed);
};

enum class TagStrategy { full, truncated };

struct RunOptions {
    /// Worker threads; 0 means worker_count().
    int threads = 0;
    /// Tag threshold rule. Unset: bisection for synchronous frames and the
    /// full strategy at alpha = 0, lambda / 4 for the full strategy at
    /// alpha > 0, bisection for the truncated strategy.
    std::optional<ThresholdMethod> threshold;
};

/// Hardware concurrency capped by the MMAC_THREADS environment variable.
int worker_count();

/// Tx symbol error rate of detect_tx. `trials` counts Tx symbols and is
/// rounded up to whole frames; the reported trials is frames * N.
/// The tag bit, previous tag bit and (when random) the channel phase are
/// redrawn for every frame. Throws domain_error for trials = 0.
ErrorEstimate run_ser_x1(const SystemConfig& cfg, double alpha, std::uint64_t trials, std::uint64_t seed,
                         const RunOptions& opts = {});

/// Tag bit error rate of the two-step receiver fed with its own Tx
/// decisions. `trials` counts tag bits (frames). Throws domain_error for
/// trials = 0 and unsupported_error for the truncated strategy with N = 1.
ErrorEstimate run_ber_x2(const SystemConfig& cfg, double alpha, TagStrategy strategy, std::uint64_t trials,
                         std::uint64_t seed, const RunOptions& opts = {});

struct MiEstimate {
    double sum_rate = 0.0;     // bits per tag symbol
    double sum_rate_se = 0.0;  // standard error
    double tag_mi = 0.0;       // bits, X1 and the channel phase known
    double tag_mi_se = 0.0;
};

/// Plug-in estimates with Gaussian Tx symbols (drawn regardless of
/// cfg.tx_modulation): the sum rate from the mixture log-density of Y and
/// the tag MI from the exact per-sample posterior. Requires a fixed channel
/// phase and samples >= 10^4.
MiEstimate run_mi_estimates(const SystemConfig& cfg, std::uint64_t samples, std::uint64_t seed,
                            const RunOptions& opts = {});

struct MlComparison {
    ErrorEstimate two_step_ser;
    ErrorEstimate ml_ser;
    ErrorEstimate two_step_ber;
    ErrorEstimate ml_ber;
};

/// Two-step receiver against ml_joint_oracle on the same synchronous frames.
/// `frames` counts frames; the SER estimates count frames * N symbols.
MlComparison run_ml_comparison(const SystemConfig& cfg, std::uint64_t frames, std::uint64_t seed,
                               const RunOptions& opts = {});

} // namespace mmac
