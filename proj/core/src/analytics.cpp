#include "mmac/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mmac/error.hpp"

namespace mmac {

namespace {

using numerics::q_function;

constexpr double kInvSqrt2 = 0.5 * std::numbers::sqrt2;

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.5)) {
        throw domain_error("alpha must lie in [0, 0.5]");
    }
}

// 1 - (1 - m)^N
double frame_failure(double m, int n) { return -std::expm1(n * std::log1p(-m)); }

// 2Q(sqrt SNR) - Q^2(sqrt SNR)
double qpsk_ser(double snr) {
    const double q = q_function(std::sqrt(snr));
    return 2.0 * q - q * q;
}

double m_at(double snr, double x, double theta) {
    const double a = std::sqrt(2.0 * snr);
    const double qc = q_function(a * (kInvSqrt2 + x * std::cos(theta)));
    const double qs = q_function(a * (kInvSqrt2 + x * std::sin(theta)));
    return qc + qs - qc * qs;
}

} // namespace

double lambda_sync(const SystemConfig& cfg) { return 2.0 * cfg.snr * cfg.backscatter_gain() * cfg.n; }

AsyncLambdas lambda_async(const SystemConfig& cfg, double alpha) {
    check_alpha(alpha);
    const double base = 2.0 * cfg.snr * cfg.backscatter_gain();
    const double n = cfg.n;
    return {base * alpha * alpha / n, base * (n + alpha * alpha / n - 2.0 * alpha)};
}

double lambda_truncated(const SystemConfig& cfg) {
    if (cfg.n < 2) {
        throw unsupported_error("lambda_truncated: requires N >= 2");
    }
    return 2.0 * cfg.snr * cfg.backscatter_gain() * (cfg.n - 1);
}

ThresholdResult threshold_lambda(double lambda, ThresholdMethod method, const numerics::Tolerance& tol) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw domain_error("threshold_lambda: lambda must be positive and finite");
    }
    if (method == ThresholdMethod::automatic) {
        method = lambda >= kAsymptoticThresholdLambda ? ThresholdMethod::asymptotic : ThresholdMethod::bisection;
    }
    if (method == ThresholdMethod::asymptotic) {
        return {lambda, lambda / 4.0, ThresholdMethod::asymptotic};
    }
    // ln chi2(x) - ln ncchi2(x, lambda): positive below the crossing.
    const numerics::RealFunction log_ratio = [lambda](double x) {
        return 0.5 * lambda - numerics::log_bessel_i0(std::sqrt(lambda * x));
    };
    const double lo = std::max(1e-6, lambda / 8.0);
    double hi = lambda + 50.0;
    if (!(log_ratio(lo) > 0.0)) {
        throw bracket_error("threshold_lambda: central density not larger at the lower bracket");
    }
    if (!(log_ratio(hi) < 0.0)) {
        hi = 10.0 * lambda + 100.0;
    }
    return {lambda, numerics::bisect_root(log_ratio, lo, hi, tol), ThresholdMethod::bisection};
}

double m_integral(double snr, double x) {
    if (!(snr > 0.0) || !(x >= 0.0) || !std::isfinite(snr) || !std::isfinite(x)) {
        throw domain_error("m_integral: snr must be positive and x nonnegative");
    }
    if (x == 0.0) {
        return qpsk_ser(snr);
    }
    constexpr int kStart = 512;
    constexpr int kMaxPoints = 1 << 20;
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    int points = kStart;
    double sum = 0.0;
    for (int i = 0; i < points; ++i) {
        sum += m_at(snr, x, kTwoPi * i / points);
    }
    double estimate = sum / points;
    while (points < kMaxPoints) {
        // Doubling reuses every existing node; only the midpoints are new.
        for (int i = 0; i < points; ++i) {
            sum += m_at(snr, x, kTwoPi * (i + 0.5) / points);
        }
        points *= 2;
        const double refined = sum / points;
        const bool done = std::abs(refined - estimate) <= 1e-10 * std::abs(refined);
        estimate = refined;
        if (done) {
            return std::clamp(estimate, 0.0, 1.0);
        }
    }
    throw quadrature_error("m_integral: periodic trapezoid did not converge", estimate,
                           std::abs(estimate) * 1e-10);
}

double m_upper(double snr, double x) {
    const double a = std::sqrt(2.0 * snr);
    const double q_far = q_function(a * (kInvSqrt2 + x));
    return std::min(1.0, 2.0 * q_function(a * (kInvSqrt2 - x)) - q_far * q_far);
}

double m_lower(double snr, double x) {
    const double a = std::sqrt(2.0 * snr);
    const double q = q_function(a * (kInvSqrt2 + x));
    return 2.0 * q - q * q;
}

double ser_x1_sync(const SystemConfig& cfg) {
    return 0.5 * (qpsk_ser(cfg.snr) + m_integral(cfg.snr, cfg.amplitude_gain()));
}

BoundPair ser_x1_bounds_sync(const SystemConfig& cfg) {
    const double p0 = qpsk_ser(cfg.snr);
    const double x = cfg.amplitude_gain();
    return {0.5 * (p0 + m_lower(cfg.snr, x)), 0.5 * (p0 + m_upper(cfg.snr, x))};
}

BoundPair ser_x1_asymptotic_bounds(const SystemConfig& cfg) {
    const double a = std::sqrt(2.0 * cfg.snr);
    return {q_function(std::sqrt(cfg.snr)), q_function(a * (kInvSqrt2 - cfg.amplitude_gain()))};
}

FrameSuccess frame_success_probs(const SystemConfig& cfg) {
    const double x = cfg.amplitude_gain();
    const double p0 = qpsk_ser(cfg.snr);
    const double m_hi = m_upper(cfg.snr, x);
    const double m_lo = m_lower(cfg.snr, x);
    FrameSuccess f;
    f.failure_bit0 = frame_failure(p0, cfg.n);
    f.failure_bit1 = {frame_failure(m_lo, cfg.n), frame_failure(m_hi, cfg.n)};
    f.given_bit0 = std::pow(1.0 - p0, cfg.n);
    f.given_bit1 = {std::pow(1.0 - m_hi, cfg.n), std::pow(1.0 - m_lo, cfg.n)};
    return f;
}

BoundPair ber_x2_bounds_sync(const SystemConfig& cfg) {
    const double lambda = lambda_sync(cfg);
    const double big_lambda = threshold_lambda(lambda).threshold;
    const double false_alarm = std::exp(-0.5 * big_lambda);
    const double miss = numerics::marcum_q1_complement(std::sqrt(lambda), std::sqrt(big_lambda));
    const FrameSuccess f = frame_success_probs(cfg);
    const double upper = 0.5 * (false_alarm + miss) * f.given_bit1.upper +
                         0.25 * (f.failure_bit0 + f.failure_bit1.upper);
    const double lower = 0.5 * (false_alarm * f.given_bit0 + miss * f.given_bit1.lower);
    return {std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0)};
}

double ber_x2_asymptotic(const SystemConfig& cfg) {
    const double lambda = lambda_sync(cfg);
    const double root = std::sqrt(lambda);
    return 0.5 * (std::exp(-lambda / 8.0) + numerics::marcum_q1_complement(root, 0.5 * root));
}

double ser_x1_async(const SystemConfig& cfg, double alpha) {
    check_alpha(alpha);
    const double n = cfg.n;
    const double x = cfg.amplitude_gain();
    const double m0 = qpsk_ser(cfg.snr);
    const double m1 = m_integral(cfg.snr, x);
    if (alpha == 0.0) {
        return 0.5 * (m0 + m1);
    }
    const double m_alpha = m_integral(cfg.snr, alpha * x);
    const double m_rest = m_integral(cfg.snr, (1.0 - alpha) * x);
    return (1.0 / (4.0 * n) + (n - 1.0) / (2.0 * n)) * (m0 + m1) + (m_alpha + m_rest) / (4.0 * n);
}

BoundPair ser_x1_async_asymptotic_bounds(const SystemConfig& cfg) {
    const double w = (2.0 * cfg.n - 1.0) / (2.0 * cfg.n);
    const BoundPair sync = ser_x1_asymptotic_bounds(cfg);
    return {w * sync.lower, w * sync.upper};
}

BoundPair ber_x2_bounds_async(const SystemConfig& cfg, double alpha) {
    check_alpha(alpha);
    if (cfg.snr < kAsyncBerMinSnr) {
        throw domain_error("ber_x2_bounds_async: defined only for SNR >= 10 dB");
    }
    const double lambda = lambda_sync(cfg);
    const AsyncLambdas l = lambda_async(cfg, alpha);
    const double big_lambda = threshold_lambda(lambda, ThresholdMethod::asymptotic).threshold;
    const double b = std::sqrt(big_lambda);
    const double lower = 0.25 * (std::exp(-0.5 * big_lambda) + numerics::marcum_q1_complement(std::sqrt(l.lambda1), b) +
                                 numerics::marcum_q1(std::sqrt(l.lambda0), b) +
                                 numerics::marcum_q1_complement(std::sqrt(lambda), b));
    const double upper = lower + 0.5 * frame_failure(m_upper(cfg.snr, cfg.amplitude_gain()), cfg.n);
    return {std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0)};
}

} // namespace mmac
