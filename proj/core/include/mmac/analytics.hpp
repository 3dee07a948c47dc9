#pragma once

#include "mmac/model.hpp"
#include "mmac/numerics.hpp"

// Error-rate expressions for QPSK Tx symbols and an on/off tag detected by
// the two-step receiver (symbol decisions, cancellation, MRC, energy test).

namespace mmac {

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
};

enum class ThresholdMethod {
    bisection,   // crossing of the central and noncentral chi^2(2) densities
    asymptotic,  // lambda / 4
    automatic,   // asymptotic when lambda >= kAsymptoticThresholdLambda
};

inline constexpr double kAsymptoticThresholdLambda = 10.0;

struct ThresholdResult {
    double lambda = 0.0;
    double threshold = 0.0;
    ThresholdMethod method = ThresholdMethod::bisection;  // never automatic
};

/// lambda = 2 SNR |g|^2 rho N
double lambda_sync(const SystemConfig& cfg);

struct AsyncLambdas {
    double lambda0 = 0.0;  // bit 0 after bit 1: 2 SNR |g|^2 rho alpha^2 / N
    double lambda1 = 0.0;  // bit 1 after bit 0: 2 SNR |g|^2 rho (N + alpha^2/N - 2 alpha)
};
AsyncLambdas lambda_async(const SystemConfig& cfg, double alpha);

/// lambda with the first sample discarded: 2 SNR |g|^2 rho (N - 1).
/// Throws unsupported_error for N = 1.
double lambda_truncated(const SystemConfig& cfg);

/// Energy-detector threshold Lambda(lambda): the x > 0 where the chi^2(2)
/// density and the noncentral chi^2(2, lambda) density cross (central larger
/// below). Throws domain_error for lambda <= 0 and bracket_error when no
/// crossing is found.
ThresholdResult threshold_lambda(double lambda, ThresholdMethod method = ThresholdMethod::bisection,
                                 const numerics::Tolerance& tol = {1e-12, 1e-12, 1 << 16});

/// Conditional QPSK symbol error probability averaged over a uniform
/// interference phase: E_theta[1 - (1 - Qc)(1 - Qs)] with
/// Qc = Q(sqrt(2 snr)(1/sqrt 2 + x cos theta)), Qs likewise with sin.
double m_integral(double snr, double x);
/// 2 Q(a (1/sqrt2 - x)) - Q^2(a (1/sqrt2 + x)), a = sqrt(2 snr). Upper bound on m_integral.
double m_upper(double snr, double x);
/// 2 Q(a (1/sqrt2 + x)) - Q^2(a (1/sqrt2 + x)). Lower bound on m_integral.
double m_lower(double snr, double x);

/// Tx SER with a synchronous on/off tag: (P0 + M(SNR, |g| sqrt rho)) / 2,
/// P0 = 2Q(sqrt SNR) - Q^2(sqrt SNR).
double ser_x1_sync(const SystemConfig& cfg);
/// (P0 + m_lower) / 2 and (P0 + m_upper) / 2.
BoundPair ser_x1_bounds_sync(const SystemConfig& cfg);
/// High-SNR pair (Q(sqrt SNR), Q(sqrt(2 SNR)(1/sqrt2 - |g| sqrt rho))).
BoundPair ser_x1_asymptotic_bounds(const SystemConfig& cfg);

struct FrameSuccess {
    double given_bit0 = 0.0;   // P(all N Tx symbols correct | bit 0)
    BoundPair given_bit1;      // bounds on P(all N correct | bit 1)
    double failure_bit0 = 0.0; // 1 - given_bit0 without cancellation
    BoundPair failure_bit1;    // 1 - given_bit1 bounds, ordered
};
FrameSuccess frame_success_probs(const SystemConfig& cfg);

/// Tag BER bounds for the synchronous receiver with the bisection threshold.
BoundPair ber_x2_bounds_sync(const SystemConfig& cfg);
/// High-SNR tag BER: (e^{-lambda/8} + 1 - Q1(sqrt lambda, sqrt lambda / 2)) / 2.
double ber_x2_asymptotic(const SystemConfig& cfg);

/// Tx SER with delay offset ratio alpha in [0, 0.5]. Equals ser_x1_sync at alpha = 0.
double ser_x1_async(const SystemConfig& cfg, double alpha);
/// (2N - 1)/(2N) times ser_x1_asymptotic_bounds.
BoundPair ser_x1_async_asymptotic_bounds(const SystemConfig& cfg);

/// High-SNR tag BER bounds with delay offset ratio alpha and threshold
/// lambda / 4. Defined for SNR >= 10 dB; throws domain_error below.
BoundPair ber_x2_bounds_async(const SystemConfig& cfg, double alpha);

/// Lowest SNR (linear) accepted by ber_x2_bounds_async.
inline constexpr double kAsyncBerMinSnr = 10.0;

} // namespace mmac
