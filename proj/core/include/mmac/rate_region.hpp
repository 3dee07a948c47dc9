#pragma once

#include <vector>

#include "mmac/model.hpp"
#include "mmac/numerics.hpp"

// All rates are in bits per tag-symbol interval (N Tx symbols). Functions
// that need a deterministic channel phase throw domain_error when
// cfg.channel.phase is random.

namespace mmac {

/// A point of the (R2, R1) plane: tag rate first, Tx rate second.
struct RatePoint {
    double r2 = 0.0;
    double r1 = 0.0;
};

/// Corner points of the achievable region. A1, B1 sit on the R1 axis, A2, B2
/// and D on the R2 axis. C = (H_lower, h_lower - H_lower).
struct RegionVertices {
    RatePoint o;
    RatePoint a1;
    RatePoint b1;
    RatePoint a2;
    RatePoint b2;
    RatePoint c;
    RatePoint d;
    /// H_lower > h_lower: C would fall below the R2 axis. c.r1 is clamped to 0.
    bool degenerate = false;

    /// Inner polygon o, B1, C, D in drawing order.
    std::vector<RatePoint> polygon() const { return {o, b1, c, d}; }
};

struct SlopePair {
    double r1_slope = 0.0;
    double r2_slope = 0.0;

    bool strictly_convex() const { return r1_slope > r2_slope; }
};

struct TdmaRates {
    double r1_max = 0.0;
    double r2_max = 0.0;
    double r2_upper = 0.0;
};

enum class TagSymbol { c1, c0 };

/// N log2(1 + |1 + g sqrt(rho) c_i|^2 SNR)
double h_i(const SystemConfig& cfg, TagSymbol which);

/// I(X1; Y | X2) = (h1 + h0) / 2
double rate_tx_given_tag(const SystemConfig& cfg);

/// Mutual information of a binary antipodal input with the given separation
/// in complex Gaussian noise of variance noise_var, measured on the real
/// axis along the separation. In [0, 1].
double mi_binary_awgn(double noise_var, double separation, const numerics::Tolerance& tol = {});

/// I(X2; Y | X1) for Gaussian X1: the binary-input MI averaged over
/// |X1|^2 ~ Gamma(N, 1). Independent of the channel phase.
double rate_tag_given_tx(const SystemConfig& cfg, const numerics::Tolerance& tol = {});

/// Closed-form lower bound on rate_tag_given_tx from the diversity-N
/// detection error probability. The error probability is clamped to
/// [0, 1/2]; clamping is reported on std::clog.
double rate_tag_lower_bound(const SystemConfig& cfg);

/// Sum rate I(X1, X2; Y) for Gaussian X1 and equiprobable X2.
double sum_rate_exact(const SystemConfig& cfg, const numerics::Tolerance& tol = {});

/// (h1 + h0) / 2. Equals sum_rate_exact iff |1 + g sqrt(rho) c1| = |1 + g sqrt(rho) c0|.
double sum_rate_lower_bound(const SystemConfig& cfg);

TdmaRates tdma_rates(const SystemConfig& cfg, const numerics::Tolerance& tol = {});

RegionVertices region_vertices(const SystemConfig& cfg, const numerics::Tolerance& tol = {});

/// r1 = h_upper / H_upper, r2 = 1 + (h_upper - h_lower) / H_lower.
/// Throws degenerate_input_error when H_upper or H_lower vanishes (|g| = 0
/// or rho = 0).
SlopePair convexity_slopes(const SystemConfig& cfg);

enum class ApproxRegime { weak_channel, low_snr_bpsk };

/// First-order slope approximations.
///   weak_channel: |g|^2 << 1, any tag constellation.
///   low_snr_bpsk: SNR << 1 with c1 = 1, c0 = -1 assumed (the configured tag
///   constellation is ignored).
/// Regime assumptions are not checked.
SlopePair approx_slopes(const SystemConfig& cfg, ApproxRegime regime);

/// Shoelace area of a polygon given in drawing order.
double polygon_area(const std::vector<RatePoint>& polygon);

} // namespace mmac
