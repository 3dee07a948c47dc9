#include "mmac/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include "mmac/error.hpp"

namespace mmac {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    const double hi = std::max(a, b);
    if (hi == -kInf) {
        return -kInf;
    }
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// |1 + g sqrt(rho) c|^2 SNR + 1, the per-sample received power given the tag state.
double received_power(const SystemConfig& cfg, TagSymbol which) {
    const cplx c = which == TagSymbol::c1 ? cfg.tag.c1 : cfg.tag.c0;
    return std::norm(1.0 + cfg.complex_gain() * c) * cfg.snr + 1.0;
}

// 1 - H_b(p) in bits, accurate when p is close to 1/2.
double one_minus_entropy(double p) {
    const double q = 1.0 - 2.0 * p;
    if (std::abs(q) < 0.05) {
        // 1 - H_b(p) = (1 / 2 ln 2) sum_n q^{2n} / (n (2n - 1))
        const double q2 = q * q;
        double power = q2;
        double sum = 0.0;
        for (int n = 1; n < 40; ++n) {
            const double term = power / (n * (2.0 * n - 1.0));
            sum += term;
            if (term < 1e-18 * sum) {
                break;
            }
            power *= q2;
        }
        return sum / (2.0 * kLn2);
    }
    return 1.0 - numerics::binary_entropy(p);
}

// ln(2 / (1 + e^{lr}))
double log_two_over_one_plus_exp(double lr) {
    if (std::abs(lr) < 1.0) {
        return -std::log1p(0.5 * std::expm1(lr));
    }
    if (lr > 0.0) {
        return kLn2 - lr - std::log1p(std::exp(-lr));
    }
    return kLn2 - std::log1p(std::exp(lr));
}

} // namespace

double h_i(const SystemConfig& cfg, TagSymbol which) {
    const cplx c = which == TagSymbol::c1 ? cfg.tag.c1 : cfg.tag.c0;
    const double gain = std::norm(1.0 + cfg.complex_gain() * c);
    return cfg.n * std::log1p(gain * cfg.snr) / kLn2;
}

double rate_tx_given_tag(const SystemConfig& cfg) {
    return 0.5 * (h_i(cfg, TagSymbol::c1) + h_i(cfg, TagSymbol::c0));
}

double mi_binary_awgn(double noise_var, double separation, const numerics::Tolerance& tol) {
    if (!(noise_var > 0.0) || !(separation >= 0.0)) {
        throw domain_error("mi_binary_awgn: noise_var must be positive and separation nonnegative");
    }
    if (std::isinf(noise_var) || separation == 0.0) {
        return 0.0;
    }
    const double m = 0.5 * separation;
    const double log_norm = -std::log(2.0 * std::sqrt(std::numbers::pi * noise_var));
    // -Psi ln Psi; Psi is even, so h(Y) = 2 * integral over [0, inf).
    const numerics::RealFunction integrand = [=](double y) {
        const double lp = log_norm + log_add(-(y - m) * (y - m) / noise_var, -(y + m) * (y + m) / noise_var);
        const double p = std::exp(lp);
        return p == 0.0 ? 0.0 : -p * lp;
    };

    const double sd = std::sqrt(0.5 * noise_var);
    std::vector<double> cuts{0.0};
    if (m - 10.0 * sd > 0.0) {
        cuts.push_back(m - 10.0 * sd);
    }
    cuts.push_back(m);
    cuts.push_back(m + 10.0 * sd);
    double h_nats = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        h_nats += numerics::integrate(integrand, cuts[i], cuts[i + 1], tol).value;
    }
    h_nats += numerics::integrate(integrand, cuts.back(), kInf, tol).value;
    h_nats *= 2.0;

    const double h_noise_nats = 0.5 * std::log(std::numbers::pi * std::numbers::e * noise_var);
    return std::clamp((h_nats - h_noise_nats) / kLn2, 0.0, 1.0);
}

double rate_tag_given_tx(const SystemConfig& cfg, const numerics::Tolerance& tol) {
    const double gain = cfg.backscatter_gain() * cfg.snr;
    const double separation = cfg.tag.separation();
    if (gain == 0.0 || separation == 0.0) {
        return 0.0;
    }
    const numerics::RealFunction mi = [&](double energy) {
        if (energy <= 0.0) {
            return 0.0;
        }
        return mi_binary_awgn(1.0 / (gain * energy), separation, tol);
    };
    return std::clamp(numerics::gamma_expectation(mi, cfg.n, tol), 0.0, 1.0);
}

double rate_tag_lower_bound(const SystemConfig& cfg) {
    const double sep = cfg.tag.separation();
    const double a = cfg.backscatter_gain() * cfg.snr * sep * sep / 4.0;
    const double mu = std::sqrt(a / (1.0 + a));
    if (mu == 0.0) {
        return 0.0;
    }
    if (mu >= 1.0) {
        return 1.0;
    }
    const int n = cfg.n;
    // p = ((1-mu)/2)^N sum_i C(N-1+i, i) ((1+mu)/2)^i, summed in log space.
    const double log_lo = std::log1p(-mu) - kLn2;
    const double log_hi = std::log1p(mu) - kLn2;
    double log_term = n * log_lo;
    double log_p = log_term;
    for (int i = 1; i < n; ++i) {
        log_term += std::log(static_cast<double>(n - 1 + i) / i) + log_hi;
        log_p = log_add(log_p, log_term);
    }
    double p = std::exp(log_p);
    if (p > 0.5) {
        std::clog << "mmac: rate_tag_lower_bound clamped error probability " << p << " to 0.5\n";
        p = 0.5;
    }
    return std::clamp(one_minus_entropy(p), 0.0, 1.0);
}

double sum_rate_exact(const SystemConfig& cfg, const numerics::Tolerance& tol) {
    const double s1 = received_power(cfg, TagSymbol::c1);
    const double s0 = received_power(cfg, TagSymbol::c0);
    const int n = cfg.n;
    // I = (h1 + h0)/2 + (D(f1 || f) + D(f0 || f)) / 2 with f the equal-weight
    // mixture. Given component i, |Y|^2 = s_i U with U ~ Gamma(N, 1), and
    // ln(f_k / f_i) = N ln(s_i / s_k) + U (1 - s_i / s_k).
    double divergence = 0.0;
    if (s1 != s0) {
        for (const auto& [si, sk] : {std::pair{s1, s0}, std::pair{s0, s1}}) {
            const double ratio = si / sk;
            const double offset = n * std::log(ratio);
            const numerics::RealFunction kl = [=](double u) {
                return log_two_over_one_plus_exp(offset + u * (1.0 - ratio));
            };
            divergence += numerics::gamma_expectation(kl, n, tol);
        }
    }
    const double jensen_nats = 0.5 * n * (std::log(s1) + std::log(s0));
    return (jensen_nats + 0.5 * std::max(divergence, 0.0)) / kLn2;
}

double sum_rate_lower_bound(const SystemConfig& cfg) { return rate_tx_given_tag(cfg); }

TdmaRates tdma_rates(const SystemConfig& cfg, const numerics::Tolerance& tol) {
    TdmaRates t;
    t.r1_max = std::max(h_i(cfg, TagSymbol::c1), h_i(cfg, TagSymbol::c0));
    const double gain = cfg.n * cfg.backscatter_gain() * cfg.snr;
    if (gain > 0.0) {
        t.r2_max = mi_binary_awgn(1.0 / gain, cfg.tag.separation(), tol);
        t.r2_upper = std::min(std::log1p(gain) / kLn2, 1.0);
    }
    return t;
}

RegionVertices region_vertices(const SystemConfig& cfg, const numerics::Tolerance& tol) {
    const TdmaRates t = tdma_rates(cfg, tol);
    const double h_upper = t.r1_max;
    const double h_lower = sum_rate_lower_bound(cfg);
    const double big_h_lower = rate_tag_lower_bound(cfg);

    RegionVertices v;
    v.b1 = {0.0, h_upper};
    v.a1 = {0.0, h_lower};
    v.b2 = {t.r2_upper, 0.0};
    v.a2 = {big_h_lower, 0.0};
    v.d = {t.r2_max, 0.0};
    v.degenerate = big_h_lower > h_lower;
    v.c = {big_h_lower, std::max(h_lower - big_h_lower, 0.0)};
    return v;
}

SlopePair convexity_slopes(const SystemConfig& cfg) {
    const double h1 = h_i(cfg, TagSymbol::c1);
    const double h0 = h_i(cfg, TagSymbol::c0);
    const double h_upper = std::max(h1, h0);
    const double h_lower = 0.5 * (h1 + h0);
    const double gain = cfg.n * cfg.backscatter_gain() * cfg.snr;
    const double big_h_upper = std::min(std::log1p(gain) / kLn2, 1.0);
    const double big_h_lower = rate_tag_lower_bound(cfg);
    if (!(big_h_upper > 0.0) || !(big_h_lower > 0.0)) {
        throw degenerate_input_error("convexity_slopes: tag rate bounds vanish (|g|, rho or |c1 - c0| is zero)");
    }
    return {h_upper / big_h_upper, 1.0 + (h_upper - h_lower) / big_h_lower};
}

SlopePair approx_slopes(const SystemConfig& cfg, ApproxRegime regime) {
    const double g2rho = cfg.backscatter_gain();
    if (!(g2rho > 0.0)) {
        throw degenerate_input_error("approx_slopes: |g|^2 rho must be positive");
    }
    const double m = numerics::m_of_n(cfg.n);
    const double snr = cfg.snr;
    const cplx z = cfg.complex_gain();

    if (regime == ApproxRegime::weak_channel) {
        const double sep = cfg.tag.separation();
        if (sep == 0.0) {
            throw degenerate_input_error("approx_slopes: c1 == c0");
        }
        const double r1 = std::log1p(snr) / (g2rho * snr);
        // Linearized (h_upper - h_lower) / N over the small-mu H_lower; SNR cancels.
        const double d_log = 1.0 / ((1.0 + snr) * kLn2);
        const double spread = std::abs(0.5 * g2rho * (std::norm(cfg.tag.c1) - std::norm(cfg.tag.c0)) +
                                       (z * (cfg.tag.c1 - cfg.tag.c0)).real());
        const double big_h = g2rho / (2.0 * kLn2) * (m * sep) * (m * sep);
        return {r1, 1.0 + cfg.n * d_log * spread / big_h};
    }

    const double plus = std::norm(1.0 + z);
    const double minus = std::norm(1.0 - z);
    const double r1 = std::max(plus, minus) / g2rho;
    const double r2 = 1.0 + cfg.n * std::abs(plus - minus) / ((2.0 * m) * (2.0 * m) * g2rho);
    return {r1, r2};
}

double polygon_area(const std::vector<RatePoint>& polygon) {
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const RatePoint& p = polygon[i];
        const RatePoint& q = polygon[(i + 1) % polygon.size()];
        twice += p.r2 * q.r1 - q.r2 * p.r1;
    }
    return 0.5 * std::abs(twice);
}

} // namespace mmac
